use crate::error::{ensure, Result};

/// A chord with continuous endpoint coordinates, `left < right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub left: f64,
    pub right: f64,
}

/// A linearized chord diagram: a perfect matching of the points `0..2N`.
///
/// Points are stored 0-based; [`ChordDiagram::from_pairs`] and
/// [`ChordDiagram::pairs`] use the 1-based labels `1..=2N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChordDiagram {
    partner: Vec<u32>,
    coords: Option<Vec<Chord>>,
}

impl ChordDiagram {
    /// Validates an involution without fixed points on `0..2N`.
    pub fn from_partners(partner: Vec<u32>) -> Result<Self> {
        let len = partner.len();
        ensure!(len >= 2 && len.is_multiple_of(2), "a diagram needs an even, positive number of points, got {len}");
        ensure!(len <= u32::MAX as usize, "too many points: {len}");
        for (i, &p) in partner.iter().enumerate() {
            let p = p as usize;
            ensure!(p < len, "partner of point {} is out of range", i + 1);
            ensure!(p != i, "point {} is matched to itself", i + 1);
            ensure!(partner[p] as usize == i, "points {} and {} do not match each other", i + 1, p + 1);
        }
        Ok(Self { partner, coords: None })
    }

    /// Builds a diagram from 1-based point pairs.
    pub fn from_pairs(n_chords: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        ensure!(pairs.len() == n_chords, "expected {n_chords} chords, got {}", pairs.len());
        let len = 2 * n_chords;
        let mut partner = vec![u32::MAX; len];
        for &(a, b) in pairs {
            ensure!((1..=len).contains(&a) && (1..=len).contains(&b), "pair ({a}, {b}) out of range 1..={len}");
            ensure!(a != b, "pair ({a}, {b}) is degenerate");
            ensure!(partner[a - 1] == u32::MAX && partner[b - 1] == u32::MAX, "pair ({a}, {b}) reuses a point");
            partner[a - 1] = (b - 1) as u32;
            partner[b - 1] = (a - 1) as u32;
        }
        Self::from_partners(partner)
    }

    /// Builds a diagram from chords with coordinates.
    ///
    /// The chords must be sorted by right endpoint and all `2N` values must be
    /// distinct and lie in `(0, 1)`.
    pub fn from_coords(chords: Vec<Chord>) -> Result<Self> {
        let n = chords.len();
        ensure!(n >= 1, "a diagram needs at least one chord");
        for (k, c) in chords.iter().enumerate() {
            ensure!(
                c.left > 0.0 && c.left < c.right && c.right < 1.0,
                "chord {} has invalid coordinates ({}, {})",
                k + 1,
                c.left,
                c.right
            );
            if k > 0 {
                ensure!(chords[k - 1].right < c.right, "chords are not sorted by distinct right endpoints");
            }
        }
        // Sort the lefts, then merge them with the (already sorted) rights.
        let mut lefts: Vec<u32> = (0..n as u32).collect();
        lefts.sort_unstable_by(|&a, &b| chords[a as usize].left.total_cmp(&chords[b as usize].left));
        let mut position_left = vec![0u32; n];
        let mut position_right = vec![0u32; n];
        let (mut i, mut k) = (0usize, 0usize);
        for pos in 0..2 * n {
            let take_left = i < n && (k >= n || chords[lefts[i] as usize].left < chords[k].right);
            if take_left {
                let c = lefts[i] as usize;
                if i + 1 < n {
                    ensure!(
                        chords[c].left != chords[lefts[i + 1] as usize].left,
                        "duplicate coordinate {}",
                        chords[c].left
                    );
                }
                ensure!(k >= n || chords[c].left != chords[k].right, "duplicate coordinate {}", chords[c].left);
                position_left[c] = pos as u32;
                i += 1;
            } else {
                ensure!(
                    i >= n || chords[lefts[i] as usize].left != chords[k].right,
                    "duplicate coordinate {}",
                    chords[k].right
                );
                position_right[k] = pos as u32;
                k += 1;
            }
        }
        let mut partner = vec![0u32; 2 * n];
        for c in 0..n {
            partner[position_left[c] as usize] = position_right[c];
            partner[position_right[c] as usize] = position_left[c];
        }
        Ok(Self { partner, coords: Some(chords) })
    }

    /// Number of chords `N`.
    pub fn chords(&self) -> usize {
        self.partner.len() / 2
    }

    /// Number of points `2N`.
    pub fn points(&self) -> usize {
        self.partner.len()
    }

    /// 0-based partner of 0-based point `p`.
    pub fn partner(&self, p: usize) -> usize {
        self.partner[p] as usize
    }

    pub fn partners(&self) -> &[u32] {
        &self.partner
    }

    pub fn coords(&self) -> Option<&[Chord]> {
        self.coords.as_deref()
    }

    /// Chords as 1-based `(left, right)` point pairs ordered by left point.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i < p as usize)
            .map(|(i, &p)| (i + 1, p as usize + 1))
            .collect()
    }
}
