//! Broken lines of non-positive slope, as monotone staircases.
//!
//! Only the induced partition of the index grid matters: the upper-left part
//! is a down-closed set of cells, described by its row lengths.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{ExpMatrix, Letter};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Staircase {
    n: usize,
    /// Row `i` of the upper-left region holds columns `0..row_lengths[i]`.
    row_lengths: Vec<usize>,
}

impl Staircase {
    pub fn new(n: usize, row_lengths: Vec<usize>) -> Result<Self> {
        if row_lengths.len() != n {
            return Err(Error::BadRegion(format!(
                "{} row lengths given for n = {n}",
                row_lengths.len()
            )));
        }
        if let Some(&l) = row_lengths.iter().find(|&&l| l > n) {
            return Err(Error::BadRegion(format!("row length {l} exceeds n = {n}")));
        }
        if row_lengths.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::BadRegion(format!(
                "row lengths {row_lengths:?} are not non-increasing"
            )));
        }
        Ok(Self { n, row_lengths })
    }

    /// Builds the staircase whose upper-left region is exactly `cells`.
    pub fn from_cells(n: usize, cells: &[Letter]) -> Result<Self> {
        let mut inside = vec![vec![false; n]; n];
        for l in cells {
            if l.row >= n || l.col >= n {
                return Err(Error::BadRegion(format!(
                    "cell {l} outside the {n}x{n} grid"
                )));
            }
            inside[l.row][l.col] = true;
        }
        let mut lengths = Vec::with_capacity(n);
        for (i, row) in inside.iter().enumerate() {
            let len = row.iter().take_while(|&&c| c).count();
            if row[len..].iter().any(|&c| c) {
                return Err(Error::BadRegion(format!(
                    "row {} of the region is not a left-aligned interval",
                    i + 1
                )));
            }
            lengths.push(len);
        }
        Self::new(n, lengths)
            .map_err(|_| Error::BadRegion("region is not a down-right staircase".to_string()))
    }

    /// Every staircase on the `n x n` grid, including the empty and full ones.
    pub fn all(n: usize) -> Vec<Staircase> {
        fn rec(n: usize, prefix: &mut Vec<usize>, bound: usize, out: &mut Vec<Staircase>) {
            if prefix.len() == n {
                out.push(Staircase {
                    n,
                    row_lengths: prefix.clone(),
                });
                return;
            }
            for l in (0..=bound).rev() {
                prefix.push(l);
                rec(n, prefix, l, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, &mut Vec::with_capacity(n), n, &mut out);
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_lengths(&self) -> &[usize] {
        &self.row_lengths
    }

    pub fn contains(&self, l: Letter) -> bool {
        l.col < self.row_lengths[l.row]
    }

    /// Splits `A` into its upper-left part and its lower-right part.
    pub fn split(&self, a: &ExpMatrix) -> (ExpMatrix, ExpMatrix) {
        let mut upper = ExpMatrix::zeros(self.n);
        let mut lower = ExpMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if self.contains(Letter::new(i, j)) {
                    &mut upper
                } else {
                    &mut lower
                };
                target.set(i, j, a.get(i, j));
            }
        }
        (upper, lower)
    }
}

impl fmt::Display for Staircase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.row_lengths.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_binomial() {
        // lattice paths in an n x n box: C(2n, n)
        assert_eq!(Staircase::all(1).len(), 2);
        assert_eq!(Staircase::all(2).len(), 6);
        assert_eq!(Staircase::all(3).len(), 20);
    }

    #[test]
    fn rejects_non_monotone_regions() {
        assert!(matches!(
            Staircase::new(2, vec![1, 2]),
            Err(Error::BadRegion(_))
        ));
        assert!(matches!(
            Staircase::new(2, vec![3, 0]),
            Err(Error::BadRegion(_))
        ));
        let z = Letter::new;
        assert!(matches!(
            Staircase::from_cells(2, &[z(1, 0)]),
            Err(Error::BadRegion(_))
        ));
        assert!(matches!(Staircase::from_cells(2, &[z(0, 0)]), Ok(_)));
        assert!(matches!(
            Staircase::from_cells(2, &[z(0, 1)]),
            Err(Error::BadRegion(_))
        ));
        assert!(matches!(
            Staircase::from_cells(2, &[z(1, 0), z(1, 1)]),
            Err(Error::BadRegion(_))
        ));
        assert!(matches!(
            Staircase::from_cells(2, &[z(0, 0), z(0, 1), z(1, 0)]),
            Ok(_)
        ));
    }

    #[test]
    fn split_partitions_the_matrix() {
        let s = Staircase::new(2, vec![2, 0]).unwrap();
        let a: ExpMatrix = "0,1;1,0".parse().unwrap();
        let (upper, lower) = s.split(&a);
        assert_eq!(upper, "0,1;0,0".parse().unwrap());
        assert_eq!(lower, "0,0;1,0".parse().unwrap());
    }
}
