//! Twisted-conjugation orbit dimensions.

use super::{conjugate, dot_perm, unit, ThetaPrime};
use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Subspace, Q};
use crate::weyl::root_to_e;
use num::Zero;

/// Linear map on sl(n+1) twisting the conjugation action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistAutomorphism {
    /// x ↦ g x g^{-1}.
    Conjugation(QMatrix),
    /// x ↦ Ad_{v1} Θ'^{-1} Ad_{v2} Θ'(x), defined where each factor is.
    Chain { v1: QMatrix, theta: ThetaPrime, v2: QMatrix },
}

impl TwistAutomorphism {
    pub fn identity(size: usize) -> Self {
        TwistAutomorphism::Conjugation(QMatrix::identity(size))
    }

    pub fn apply(&self, x: &QMatrix) -> Option<QMatrix> {
        match self {
            TwistAutomorphism::Conjugation(g) => Some(conjugate(g, x)),
            TwistAutomorphism::Chain { v1, theta, v2 } => {
                let y = theta.apply(x)?;
                let y = conjugate(v2, &y);
                let y = theta.apply_inverse(&y)?;
                Some(conjugate(v1, &y))
            }
        }
    }

    /// Bracket preservation on the given elements (where defined).
    pub fn preserves_brackets(&self, xs: &[QMatrix]) -> bool {
        for x in xs {
            for y in xs {
                let lhs = self.apply(&super::bracket(x, y));
                let rhs = match (self.apply(x), self.apply(y)) {
                    (Some(a), Some(b)) => Some(super::bracket(&a, &b)),
                    _ => None,
                };
                if let (Some(l), Some(r)) = (lhs, rhs) {
                    if l != r {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn flatten(x: &QMatrix) -> Vec<Q> {
    x.entries().to_vec()
}

/// Root vectors and coroots spanning the derived algebra of a root subsystem
/// (roots given in simple-root coordinates of A_n; both signs expected).
pub fn derived_basis(size: usize, roots: &[Vec<i64>]) -> Vec<QMatrix> {
    let n = size - 1;
    let mut out = Vec::new();
    for r in roots {
        let e = root_to_e(r, n);
        let a = e.iter().position(|&x| x == 1).expect("type A root");
        let b = e.iter().position(|&x| x == -1).expect("type A root");
        out.push(unit(size, a, b));
        if a < b {
            out.push(unit(size, a, a).sub(&unit(size, b, b)));
        }
    }
    out
}

/// Diagonal traceless matrices H_1..H_n.
pub fn cartan_basis(size: usize) -> Vec<QMatrix> {
    (0..size.saturating_sub(1)).map(|i| unit(size, i, i).sub(&unit(size, i + 1, i + 1))).collect()
}

/// Rank of x ↦ f·twist(x)·f^{-1} - x on the span of `basis`.
pub fn tc_rank(f: &QMatrix, twist: &TwistAutomorphism, basis: &[QMatrix]) -> Result<usize> {
    let size = f.rows();
    let dom = Subspace::span(size * size, &basis.iter().map(flatten).collect::<Vec<_>>());
    let finv = f.inverse().ok_or_else(|| Error::Parse("orbit base point is singular".into()))?;
    let mut cols = Vec::with_capacity(basis.len());
    for x in basis {
        let tx = twist.apply(x).ok_or(Error::SubalgebraNotPreserved)?;
        if !dom.contains(&flatten(&tx)) {
            return Err(Error::SubalgebraNotPreserved);
        }
        cols.push(flatten(&f.mul(&tx).mul(&finv).sub(x)));
    }
    if cols.is_empty() {
        return Ok(0);
    }
    Ok(QMatrix::from_columns(size * size, &cols).rank())
}

/// Orbit dimension of f on the derived part of the subalgebra with the
/// given roots.
pub fn tc_orbit_dim(f: &QMatrix, twist: &TwistAutomorphism, roots: &[Vec<i64>]) -> Result<usize> {
    tc_rank(f, twist, &derived_basis(f.rows(), roots))
}

/// As [`tc_orbit_dim`] with extra Cartan directions adjoined.
pub fn tc_orbit_dim_full(
    f: &QMatrix,
    twist: &TwistAutomorphism,
    roots: &[Vec<i64>],
    cartan: &[QMatrix],
) -> Result<usize> {
    let mut basis = derived_basis(f.rows(), roots);
    basis.extend(cartan.iter().cloned());
    tc_rank(f, twist, &basis)
}

/// Dimension of {X : BX = XB} in gl(j).
pub fn centralizer_dim(b: &QMatrix) -> usize {
    let j = b.rows();
    let cols: Vec<Vec<Q>> = (0..j * j)
        .map(|k| {
            let x = unit(j, k / j, k % j);
            flatten(&b.mul(&x).sub(&x.mul(b)))
        })
        .collect();
    if cols.is_empty() {
        return 0;
    }
    j * j - QMatrix::from_columns(j * j, &cols).rank()
}

/// The cycle (j+1 ... n+1) on {1..n+1}, zero-based images.
pub fn cg_sigma1(n: usize, j: usize) -> Vec<usize> {
    (0..=n).map(|k| if k < j { k } else if k < n { k + 1 } else { j }).collect()
}

/// The element (1 ... n+1-k)^{-1}, zero-based images.
pub fn cg_sigma2(n: usize, k: usize) -> Vec<usize> {
    let m = n - k;
    (0..=n).map(|p| if p > m { p } else if p == 0 { m } else { p - 1 }).collect()
}

/// Roots of the gl(j) block in the top-left corner.
pub fn block_roots(n: usize, j: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for a in 0..j {
        for b in 0..j {
            if a != b {
                out.push(crate::weyl::e_diff_to_root(a, b, n));
            }
        }
    }
    out
}

/// Embeds B ∈ GL(j) as diag(B, 1, ..., 1, det B^{-1}) in SL(n+1).
pub fn embed_block(n: usize, b: &QMatrix) -> QMatrix {
    let j = b.rows();
    let mut f = QMatrix::identity(n + 1);
    for r in 0..j {
        for c in 0..j {
            f.set(r, c, b.get(r, c).clone());
        }
    }
    if j > 0 {
        let d = b.det();
        let corner = f.get(n, n) * (q(1) / d);
        f.set(n, n, corner);
    }
    f
}

/// Twisted-conjugation orbit of diag(B, 1, ..., det B^{-1}) under
/// TC^{σ̇^j_1} on g^v, against the conjugation orbit of B in GL(j).
pub fn cg_orbit_correspondence(n: usize, j: usize, b: &QMatrix) -> Result<(usize, usize)> {
    if j > n || b.rows() != j || !b.is_square() {
        return Err(Error::DimensionMismatch { expected: j, got: b.rows() });
    }
    if j > 0 && b.det().is_zero() {
        return Err(Error::Parse("B must be invertible".into()));
    }
    let size = n + 1;
    let f = embed_block(n, b);
    let twist = TwistAutomorphism::Conjugation(dot_perm(&cg_sigma1(n, j)));
    let tc = tc_orbit_dim_full(&f, &twist, &block_roots(n, j), &cartan_basis(size))?;
    let gl = j * j - centralizer_dim(b);
    if tc != gl + (n - j) {
        return Err(Error::Internal(format!("orbit gap {tc} - {gl} differs from n - j = {}", n - j)));
    }
    Ok((tc, gl))
}

/// Whether every entry is zero.
pub fn is_zero_matrix(m: &QMatrix) -> bool {
    m.entries().iter().all(Zero::is_zero)
}
