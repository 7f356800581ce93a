//! Operator-valued block matrices and coupling vectors.
//!
//! Scattering matrices are `n × n` arrays of `d × d` system operators, and
//! coupling vectors are `n`-vectors of system operators. Products follow the
//! usual block rules with operator multiplication inside each block.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::operator::{Operator, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    n: usize,
    d: usize,
    /// row-major blocks
    blocks: Vec<Operator>,
}

impl BlockMatrix {
    pub fn from_blocks(rows: Vec<Vec<Operator>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::dims("scattering matrix must have a channel", 1, 0));
        }
        let d = rows[0].first().map(|b| b.dim()).unwrap_or(0);
        let mut blocks = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::dims("scattering matrix row length", n, row.len()));
            }
            for b in row {
                b.check_dim(d, "scattering block")?;
                blocks.push(b);
            }
        }
        Ok(BlockMatrix { n, d, blocks })
    }

    pub fn identity(n: usize, d: usize) -> Self {
        Self::from_scalar(&DMatrix::identity(n, n), d)
    }

    /// `R ⊗ I_d` for a scalar `n × n` matrix `R`.
    pub fn from_scalar(r: &DMatrix<C64>, d: usize) -> Self {
        let n = r.nrows();
        let mut blocks = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                blocks.push(Operator::scalar(d, r[(i, j)]));
            }
        }
        BlockMatrix { n, d, blocks }
    }

    /// Split an assembled `nd × nd` matrix into `d × d` blocks.
    pub fn from_assembled(m: &Operator, n: usize) -> Result<Self> {
        if n == 0 || !m.dim().is_multiple_of(n) {
            return Err(Error::dims("assembled scattering matrix", n, m.dim()));
        }
        let d = m.dim() / n;
        let mut blocks = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let b = m.matrix().view((i * d, j * d), (d, d)).into_owned();
                blocks.push(Operator::from_matrix(b));
            }
        }
        Ok(BlockMatrix { n, d, blocks })
    }

    pub fn channels(&self) -> usize {
        self.n
    }

    pub fn system_dim(&self) -> usize {
        self.d
    }

    pub fn block(&self, i: usize, j: usize) -> &Operator {
        &self.blocks[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Operator>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.block(i, j).clone()).collect())
            .collect()
    }

    pub fn assemble(&self) -> Operator {
        let (n, d) = (self.n, self.d);
        let mut m = DMatrix::zeros(n * d, n * d);
        for i in 0..n {
            for j in 0..n {
                m.view_mut((i * d, j * d), (d, d))
                    .copy_from(self.block(i, j).matrix());
            }
        }
        Operator::from_matrix(m)
    }

    pub fn adjoint(&self) -> Self {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for i in 0..self.n {
            for j in 0..self.n {
                blocks.push(self.block(j, i).adjoint());
            }
        }
        BlockMatrix {
            n: self.n,
            d: self.d,
            blocks,
        }
    }

    pub fn mul(&self, other: &BlockMatrix) -> BlockMatrix {
        assert_eq!((self.n, self.d), (other.n, other.d), "block shape mismatch");
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = Operator::zeros(self.d);
                for k in 0..self.n {
                    acc += &(self.block(i, k) * other.block(k, j));
                }
                blocks.push(acc);
            }
        }
        BlockMatrix {
            n: self.n,
            d: self.d,
            blocks,
        }
    }

    /// `S · L` for a coupling vector `L`.
    pub fn apply(&self, l: &[Operator]) -> Vec<Operator> {
        assert_eq!(l.len(), self.n, "coupling vector length mismatch");
        (0..self.n)
            .map(|i| {
                let mut acc = Operator::zeros(self.d);
                for (j, lj) in l.iter().enumerate() {
                    acc += &(self.block(i, j) * lj);
                }
                acc
            })
            .collect()
    }

    /// `S − I`.
    pub fn minus_identity(&self) -> BlockMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            out.blocks[i * self.n + i] = &out.blocks[i * self.n + i] - &Operator::identity(self.d);
        }
        out
    }

    /// Spectral norm of `S − I` in assembled form.
    pub fn distance_to_identity(&self) -> f64 {
        self.minus_identity().assemble().op_norm()
    }

    pub fn scale_block(&mut self, i: usize, j: usize, factor: C64) {
        let k = i * self.n + j;
        self.blocks[k] = self.blocks[k].scale(factor);
    }
}

/// `Σ_i a_i* b_i`.
pub fn inner(a: &[Operator], b: &[Operator]) -> Operator {
    assert_eq!(a.len(), b.len(), "coupling vector length mismatch");
    let d = a.first().map(|x| x.dim()).expect("empty coupling vector");
    let mut acc = Operator::zeros(d);
    for (x, y) in a.iter().zip(b) {
        acc += &(&x.adjoint() * y);
    }
    acc
}

/// `Σ_i a_i b_i` with no adjoint on `a` (row-vector times column-vector).
pub fn row_times_col(a: &[Operator], b: &[Operator]) -> Operator {
    assert_eq!(a.len(), b.len(), "coupling vector length mismatch");
    let d = a.first().map(|x| x.dim()).expect("empty coupling vector");
    let mut acc = Operator::zeros(d);
    for (x, y) in a.iter().zip(b) {
        acc += &(x * y);
    }
    acc
}

/// Row vector `a · S`, i.e. `(a S)_j = Σ_i a_i S_ij`.
pub fn row_times_block(a: &[Operator], s: &BlockMatrix) -> Vec<Operator> {
    let n = s.channels();
    assert_eq!(a.len(), n, "coupling vector length mismatch");
    (0..n)
        .map(|j| {
            let mut acc = Operator::zeros(s.system_dim());
            for (i, ai) in a.iter().enumerate() {
                acc += &(ai * s.block(i, j));
            }
            acc
        })
        .collect()
}

/// Row vector `a* · S`, i.e. `(a* S)_j = Σ_i a_i* S_ij`.
pub fn adjoint_row_times_block(a: &[Operator], s: &BlockMatrix) -> Vec<Operator> {
    let adj: Vec<Operator> = a.iter().map(|x| x.adjoint()).collect();
    row_times_block(&adj, s)
}

pub fn add(a: &[Operator], b: &[Operator]) -> Vec<Operator> {
    assert_eq!(a.len(), b.len(), "coupling vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Operator], b: &[Operator]) -> Vec<Operator> {
    assert_eq!(a.len(), b.len(), "coupling vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Operator], z: C64) -> Vec<Operator> {
    a.iter().map(|x| x.scale(z)).collect()
}

pub fn neg(a: &[Operator]) -> Vec<Operator> {
    a.iter().map(|x| -x).collect()
}

pub fn zeros(n: usize, d: usize) -> Vec<Operator> {
    vec![Operator::zeros(d); n]
}

/// `α ⊗ I_d` as a coupling vector.
pub fn from_amplitudes(alpha: &[C64], d: usize) -> Vec<Operator> {
    alpha.iter().map(|&a| Operator::scalar(d, a)).collect()
}

/// Spectral norm of the `nd × d` column operator `[L_1; …; L_n]`,
/// i.e. `√‖Σ L_i* L_i‖`.
pub fn column_norm(l: &[Operator]) -> f64 {
    inner(l, l).op_norm().sqrt()
}

/// `Σ_i |α_i|²`.
pub fn amplitude_norm_sq(alpha: &[C64]) -> f64 {
    alpha.iter().map(|z| z.norm_sqr()).sum()
}
