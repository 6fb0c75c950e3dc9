//! Octonion multiplication from the shipped table, with an integrity check.

use nalgebra::{DMatrix, DVector};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Shipped unit octonion table.
pub const TABLE: &str = include_str!("../data/octonion_triples.txt");
/// SHA-256 of [`TABLE`].
pub const TABLE_SHA256: &str = "2083bee42f6f26d9379072e6da6e362f2a34543c0ac0a6b504310fbb309619e4";

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Structure constants `c[i][j] = (sign, k)` with `e_i e_j = sign e_k`,
/// indices `0..8` where `e_0 = 1`.
#[derive(Clone, Debug)]
pub struct Octonions {
    table: [[(f64, usize); 8]; 8],
}

impl Octonions {
    /// Parses a table after checking its SHA-256 against `expected_sha256`.
    pub fn from_table(text: &str, expected_sha256: &str) -> Result<Self> {
        let digest = hex(&Sha256::digest(text.as_bytes()));
        if digest != expected_sha256 {
            return Err(Error::DataIntegrity(format!("octonion table checksum {digest} != {expected_sha256}")));
        }
        let mut table = [[(0.0, usize::MAX); 8]; 8];
        for (i, row) in table.iter_mut().enumerate() {
            row[0] = (1.0, i);
            if i > 0 {
                row[i] = (-1.0, 0);
            }
        }
        for (i, cell) in table[0].iter_mut().enumerate() {
            *cell = (1.0, i);
        }
        let mut triples = 0;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let idx: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::DataIntegrity(format!("bad table line {line:?}"))))
                .collect::<Result<_>>()?;
            let [a, b, c] = idx[..] else {
                return Err(Error::DataIntegrity(format!("bad table line {line:?}")));
            };
            if [a, b, c].iter().any(|&x| !(1..=7).contains(&x)) {
                return Err(Error::DataIntegrity(format!("index out of range in {line:?}")));
            }
            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                table[x][y] = (1.0, z);
                table[y][x] = (-1.0, z);
            }
            triples += 1;
        }
        if triples != 7 || table.iter().flatten().any(|&(_, k)| k == usize::MAX) {
            return Err(Error::DataIntegrity("octonion table is incomplete".into()));
        }
        Ok(Self { table })
    }

    /// The shipped table.
    pub fn standard() -> Result<Self> {
        Self::from_table(TABLE, TABLE_SHA256)
    }

    pub fn mul(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(8);
        for i in 0..8 {
            for j in 0..8 {
                let (s, k) = self.table[i][j];
                out[k] += s * x[i] * y[j];
            }
        }
        out
    }

    /// Matrix of `x -> e_i x` on `R^8`.
    pub fn left(&self, i: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(8, 8);
        for j in 0..8 {
            let (s, k) = self.table[i][j];
            m[(k, j)] = s;
        }
        m
    }

    /// `<e_i, e_j e_k>` for imaginary units, indices `1..=7`.
    pub fn phi(&self, i: usize, j: usize, k: usize) -> f64 {
        let (s, l) = self.table[j][k];
        if l == i {
            s
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    #[test]
    fn checksum_guards_the_table() {
        assert!(Octonions::standard().is_ok());
        let tampered = TABLE.replace("3 6 5", "3 5 6");
        assert!(matches!(Octonions::from_table(&tampered, TABLE_SHA256), Err(Error::DataIntegrity(_))));
        // A correctly hashed but incomplete table is rejected as well.
        let short = TABLE.replace("1 2 3\n", "");
        let digest = hex(&Sha256::digest(short.as_bytes()));
        assert!(matches!(Octonions::from_table(&short, &digest), Err(Error::DataIntegrity(_))));
    }

    #[test]
    fn norm_is_multiplicative() {
        let o = Octonions::standard().unwrap();
        let mut rng = sampling::rng(11);
        for _ in 0..20 {
            let x = sampling::gaussian_vector(&mut rng, 8);
            let y = sampling::gaussian_vector(&mut rng, 8);
            let lhs = o.mul(&x, &y).norm();
            assert!((lhs - x.norm() * y.norm()).abs() < 1e-12 * (1.0 + lhs));
        }
    }

    #[test]
    fn left_units_anticommute() {
        let o = Octonions::standard().unwrap();
        for i in 1..8 {
            for j in 1..8 {
                let (a, b) = (o.left(i), o.left(j));
                let ac = &a * &b + &b * &a;
                let expect = if i == j { DMatrix::identity(8, 8) * -2.0 } else { DMatrix::zeros(8, 8) };
                assert!((ac - expect).amax() < 1e-15);
            }
        }
    }
}
