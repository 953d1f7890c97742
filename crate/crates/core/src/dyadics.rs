//! Gibbsian dyadics: second-order tensors over ℝ³ in nonion form.
//!
//! Entry `(i, j)` of a [`Tensor3`] is the coefficient of `e_i ⊗ e_j`: rows
//! index the antecedent, columns the consequent. A dyadic has no bare
//! product with a vector; it is applied either as a postfactor (`c · T`,
//! [`Tensor3::postfactor`]) or as a prefactor (`T · c`, [`Tensor3::prefactor`]).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::DyadicError;
use crate::format;
use crate::ga::Vec3;

/// A 3×3 second-order tensor. Serializes as a row-major array of arrays.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tensor3 {
    entries: [[f64; 3]; 3],
}

impl Tensor3 {
    pub const ZERO: Tensor3 = Tensor3 {
        entries: [[0.0; 3]; 3],
    };

    pub const IDENTITY: Tensor3 = Tensor3 {
        entries: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    pub const fn from_rows(entries: [[f64; 3]; 3]) -> Self {
        Tensor3 { entries }
    }

    /// Builds a tensor whose row `i` is `rows[i]`.
    pub fn from_row_vectors(rows: [Vec3; 3]) -> Self {
        Tensor3::from_rows(rows.map(Vec3::to_array))
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Tensor3::from_rows(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        self.entries
    }

    /// Entry at 0-based row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> Vec3 {
        self.entries[i].into()
    }

    pub fn column(&self, j: usize) -> Vec3 {
        Vec3::new(self.entries[0][j], self.entries[1][j], self.entries[2][j])
    }

    /// The dyad `a ⊗ b`, with entries `a_i b_j`.
    pub fn dyad(a: Vec3, b: Vec3) -> Self {
        Tensor3::from_fn(|i, j| a[i] * b[j])
    }

    /// Basis dyad `e_i ⊗ e_j` with 1-based indices.
    pub fn nonion_basis(i: usize, j: usize) -> Result<Self, DyadicError> {
        if !(1..=3).contains(&i) || !(1..=3).contains(&j) {
            return Err(DyadicError::IndexOutOfRange(i, j));
        }
        Ok(Tensor3::dyad(Vec3::unit(i - 1), Vec3::unit(j - 1)))
    }

    /// Nonion expansion: the nine `(i, j, T_ij)` terms with 1-based indices.
    pub fn nonion_terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..3).flat_map(move |i| (0..3).map(move |j| (i + 1, j + 1, self.entries[i][j])))
    }

    /// Sums `coefficient * e_i ⊗ e_j` over the given 1-based terms.
    pub fn from_nonion(
        terms: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, DyadicError> {
        terms.into_iter().try_fold(Tensor3::ZERO, |acc, (i, j, c)| {
            Ok(acc + Tensor3::nonion_basis(i, j)? * c)
        })
    }

    /// `c · T`: component `j` is `Σ_i c_i T_ij`.
    pub fn postfactor(c: Vec3, t: &Tensor3) -> Vec3 {
        Vec3::new(
            c[0] * t.entries[0][0] + c[1] * t.entries[1][0] + c[2] * t.entries[2][0],
            c[0] * t.entries[0][1] + c[1] * t.entries[1][1] + c[2] * t.entries[2][1],
            c[0] * t.entries[0][2] + c[1] * t.entries[1][2] + c[2] * t.entries[2][2],
        )
    }

    /// `T · c`: component `i` is `Σ_j T_ij c_j`.
    pub fn prefactor(t: &Tensor3, c: Vec3) -> Vec3 {
        Vec3::new(t.row(0).dot(c), t.row(1).dot(c), t.row(2).dot(c))
    }

    /// Single contraction `S · T` of two dyadics.
    pub fn dot(&self, other: &Tensor3) -> Tensor3 {
        Tensor3::from_fn(|i, j| (0..3).map(|k| self.entries[i][k] * other.entries[k][j]).sum())
    }

    pub fn transpose(&self) -> Tensor3 {
        Tensor3::from_fn(|i, j| self.entries[j][i])
    }

    /// Symmetric part `½(T + T†)`.
    pub fn sym(&self) -> Tensor3 {
        Tensor3::from_fn(|i, j| 0.5 * (self.entries[i][j] + self.entries[j][i]))
    }

    /// Antisymmetric part `½(T − T†)`.
    pub fn antisym(&self) -> Tensor3 {
        Tensor3::from_fn(|i, j| 0.5 * (self.entries[i][j] - self.entries[j][i]))
    }

    pub fn trace(&self) -> f64 {
        self.entries[0][0] + self.entries[1][1] + self.entries[2][2]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        *self == -self.transpose()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_finite())
    }

    /// Text rendering with `digits` significant digits, columns right-aligned.
    pub fn render(&self, digits: usize) -> String {
        let cells: Vec<String> = self
            .entries
            .iter()
            .flatten()
            .map(|&x| format::sig(x, digits))
            .collect();
        let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1);
        cells
            .chunks(3)
            .map(|row| {
                let row: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                format!("[ {} ]", row.join("  "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl Add for Tensor3 {
    type Output = Tensor3;
    fn add(self, o: Tensor3) -> Tensor3 {
        Tensor3::from_fn(|i, j| self.entries[i][j] + o.entries[i][j])
    }
}

impl Sub for Tensor3 {
    type Output = Tensor3;
    fn sub(self, o: Tensor3) -> Tensor3 {
        Tensor3::from_fn(|i, j| self.entries[i][j] - o.entries[i][j])
    }
}

impl Neg for Tensor3 {
    type Output = Tensor3;
    fn neg(self) -> Tensor3 {
        self * -1.0
    }
}

impl Mul<f64> for Tensor3 {
    type Output = Tensor3;
    fn mul(self, s: f64) -> Tensor3 {
        Tensor3::from_fn(|i, j| self.entries[i][j] * s)
    }
}

impl fmt::Display for Tensor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(6))
    }
}
