use crate::error::{ensure, Error, Result};

/// Largest number of chords the enumerator accepts: `17!! = 34,459,425`.
pub const MAX_CHORDS: usize = 9;

/// `(2N - 1)!!`, the number of perfect matchings of `2N` points.
pub fn double_factorial_odd(n_chords: usize) -> u64 {
    (1..=n_chords as u64).map(|k| 2 * k - 1).product()
}

/// Streaming enumeration of the perfect matchings of the points `0..2N`.
///
/// Each item is a partner array (0-based). Matchings come out in
/// lexicographic order of the partner choices made for the smallest
/// unmatched point, so the first coordinate to change is the partner of
/// point 0. Only one partner array is kept in memory.
#[derive(Debug, Clone)]
pub struct Pairings {
    partner: Vec<u32>,
    /// Left points of the chords placed so far, in placement order.
    stack: Vec<u32>,
    /// The enumeration never backtracks below this many placed chords.
    floor: usize,
    started: bool,
    done: bool,
}

const FREE: u32 = u32::MAX;

impl Pairings {
    /// All `(2N - 1)!!` matchings of `2N` points.
    pub fn new(n_chords: usize) -> Result<Self> {
        check_size(n_chords)?;
        Ok(Self {
            partner: vec![FREE; 2 * n_chords],
            stack: Vec::with_capacity(n_chords),
            floor: 0,
            started: false,
            done: false,
        })
    }

    /// The `(2N - 3)!!` matchings in which point 0 is matched to
    /// `first_partner`, one of the `2N - 1` independent shards.
    pub fn shard(n_chords: usize, first_partner: usize) -> Result<Self> {
        let mut it = Self::new(n_chords)?;
        ensure!(
            first_partner >= 1 && first_partner < 2 * n_chords,
            "first partner {first_partner} out of range 1..{}",
            2 * n_chords
        );
        it.link(0, first_partner as u32);
        it.floor = 1;
        Ok(it)
    }

    fn link(&mut self, p: u32, q: u32) {
        self.partner[p as usize] = q;
        self.partner[q as usize] = p;
        self.stack.push(p);
    }

    fn next_free(&self, from: usize) -> Option<u32> {
        (from..self.partner.len()).find(|&i| self.partner[i] == FREE).map(|i| i as u32)
    }

    /// Matches every remaining point greedily with the smallest choice.
    fn fill(&mut self) {
        while let Some(p) = self.next_free(0) {
            let q = self.next_free(p as usize + 1).expect("an even number of free points");
            self.link(p, q);
        }
    }

    /// Advances to the next matching; false when exhausted.
    fn advance(&mut self) -> bool {
        while self.stack.len() > self.floor {
            let p = self.stack.pop().unwrap();
            let q = self.partner[p as usize];
            self.partner[p as usize] = FREE;
            self.partner[q as usize] = FREE;
            if let Some(next) = self.next_free(q as usize + 1) {
                self.link(p, next);
                self.fill();
                return true;
            }
        }
        false
    }

    /// Visits every remaining matching without allocating per item.
    pub fn for_each(mut self, mut f: impl FnMut(&[u32])) {
        while let Some(partner) = self.step() {
            f(partner);
        }
    }

    fn step(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill();
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(&self.partner)
    }
}

impl Iterator for Pairings {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        self.step().map(<[u32]>::to_vec)
    }
}

/// All perfect matchings of `2N` points, streamed.
pub fn enumerate_pairings(n_chords: usize) -> Result<Pairings> {
    Pairings::new(n_chords)
}

fn check_size(n_chords: usize) -> Result<()> {
    if n_chords > MAX_CHORDS {
        return Err(Error::ResourceLimit(format!(
            "enumerating {n_chords} chords exceeds the limit of {MAX_CHORDS} ({} matchings)",
            double_factorial_odd(MAX_CHORDS)
        )));
    }
    ensure!(n_chords >= 1, "need at least one chord");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_are_double_factorials() {
        assert_eq!(enumerate_pairings(1).unwrap().count(), 1);
        assert_eq!(enumerate_pairings(2).unwrap().count(), 3);
        assert_eq!(enumerate_pairings(3).unwrap().count(), 15);
        assert_eq!(double_factorial_odd(9), 34_459_425);
    }

    #[test]
    fn five_chords_give_945_distinct_involutions() {
        let all: Vec<Vec<u32>> = enumerate_pairings(5).unwrap().collect();
        assert_eq!(all.len(), 945);
        let distinct: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), 945);
        for p in &all {
            assert!(p.iter().enumerate().all(|(i, &q)| q as usize != i && p[q as usize] as usize == i));
        }
    }

    #[test]
    fn order_is_lexicographic_in_the_partner_array() {
        let all: Vec<Vec<u32>> = enumerate_pairings(4).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], vec![1, 0, 3, 2, 5, 4, 7, 6]);
    }

    #[test]
    fn shards_partition_the_enumeration() {
        let whole: Vec<Vec<u32>> = enumerate_pairings(4).unwrap().collect();
        let mut joined = Vec::new();
        for q in 1..8 {
            let shard: Vec<Vec<u32>> = Pairings::shard(4, q).unwrap().collect();
            assert_eq!(shard.len(), 15);
            assert!(shard.iter().all(|p| p[0] as usize == q));
            joined.extend(shard);
        }
        assert_eq!(joined, whole);
        assert!(Pairings::shard(4, 0).is_err());
        assert!(Pairings::shard(4, 8).is_err());
    }

    #[test]
    fn size_limits() {
        assert!(matches!(enumerate_pairings(10), Err(Error::ResourceLimit(_))));
        assert!(enumerate_pairings(0).is_err());
    }
}
