//! Exact matrix realization in sl(n+1) / SL(n+1).
//!
//! Root vectors are matrix units: x_α = E_ab for α = e_a - e_b, and the
//! Cartan element t_i is H_i = E_ii - E_{i+1,i+1}. The trace form then
//! matches the root-system normalization.

pub mod bruhat;
pub mod normalize;
pub mod orbit;
pub mod tensor;

use crate::bdtriple::BDTriple;
use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Q};
use crate::rootsys::RootSystem;
use crate::weyl::WeylElement;
use num::Zero;

pub use bruhat::{bruhat_decompose, borel_bruhat, BruhatDecomposition};
pub use normalize::{normalize_coset, NormalizedCoset};
pub use orbit::{cg_orbit_correspondence, tc_orbit_dim, tc_orbit_dim_full, TwistAutomorphism};
pub use tensor::{check_cybe, check_symmetric_part, realize_r, Tensor2, Tensor3};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    Group,
    Algebra,
}

/// Square rational matrix with det = 1 (group) or trace = 0 (algebra).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixElement {
    pub entries: QMatrix,
    pub kind: MatrixKind,
}

impl MatrixElement {
    pub fn group(entries: QMatrix) -> Result<Self> {
        if !entries.is_square() || entries.det() != q(1) {
            return Err(Error::Parse("group element must be square with det 1".into()));
        }
        Ok(MatrixElement { entries, kind: MatrixKind::Group })
    }

    pub fn algebra(entries: QMatrix) -> Result<Self> {
        if !entries.is_square() || !entries.trace().is_zero() {
            return Err(Error::Parse("algebra element must be square and traceless".into()));
        }
        Ok(MatrixElement { entries, kind: MatrixKind::Algebra })
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }
}

/// Parses rows of "p/q" entries, one row per line.
pub fn parse_matrix(text: &str) -> Result<QMatrix> {
    let rows: Vec<Vec<Q>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_whitespace()
                .map(|e| crate::linalg::parse_q(e).ok_or_else(|| Error::Parse(format!("bad entry {e:?}"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::Parse("matrix rows are empty or ragged".into()));
    }
    Ok(QMatrix::from_rows(&rows))
}

pub fn unit(n: usize, i: usize, j: usize) -> QMatrix {
    let mut m = QMatrix::zeros(n, n);
    m.set(i, j, q(1));
    m
}

/// Signed permutation matrix for w: ẇ e_i = ± e_{σ(i)}, with the first
/// moved column negated when the permutation is odd.
pub fn dot_w(rs: &RootSystem, w: &WeylElement) -> Result<QMatrix> {
    let perm = w.to_permutation(rs).ok_or(Error::NotTypeA)?;
    Ok(dot_perm(&perm))
}

pub fn dot_perm(perm: &[usize]) -> QMatrix {
    let n = perm.len();
    let mut m = QMatrix::zeros(n, n);
    for (i, &p) in perm.iter().enumerate() {
        m.set(p, i, q(1));
    }
    if perm_sign(perm) < 0 {
        let c = perm.iter().enumerate().position(|(i, &p)| i != p).expect("odd permutation moves something");
        let v = -m.get(perm[c], c).clone();
        m.set(perm[c], c, v);
    }
    m
}

pub fn perm_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut c = s;
        while !seen[c] {
            seen[c] = true;
            c = perm[c];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Adjoint action g x g^{-1}.
pub fn conjugate(g: &QMatrix, x: &QMatrix) -> QMatrix {
    g.mul(x).mul(&g.inverse().expect("invertible"))
}

pub fn bracket(x: &QMatrix, y: &QMatrix) -> QMatrix {
    x.mul(y).sub(&y.mul(x))
}

/// Signed matrix unit ε E_{pq}.
pub type SignedUnit = (i64, usize, usize);

fn unit_bracket(x: SignedUnit, y: SignedUnit) -> Option<SignedUnit> {
    let (s1, p, qq) = x;
    let (s2, r, s) = y;
    let a = qq == r && p != s;
    let b = s == p && r != qq;
    match (a, b) {
        (true, false) => Some((s1 * s2, p, s)),
        (false, true) => Some((-s1 * s2, r, qq)),
        _ => None,
    }
}

/// Image of E_ab (a ≠ b, root of l1) under the Lie algebra map that sends
/// the Chevalley generators of l1 to those of l2 along τ.
pub fn tau_unit(triple: &BDTriple, a: usize, b: usize) -> Option<SignedUnit> {
    map_unit(a, b, &|i| triple.tau.get(&i).copied())
}

/// Same for τ^{-1} on roots of l2.
pub fn tau_inv_unit(triple: &BDTriple, a: usize, b: usize) -> Option<SignedUnit> {
    let inv = triple.inverse_tau();
    map_unit(a, b, &|i| inv.get(&i).copied())
}

fn map_unit(a: usize, b: usize, t: &dyn Fn(usize) -> Option<usize>) -> Option<SignedUnit> {
    if a < b {
        if b == a + 1 {
            let s = t(a)?;
            return Some((1, s, s + 1));
        }
        let left = map_unit(a, b - 1, t)?;
        let right = map_unit(b - 1, b, t)?;
        unit_bracket(left, right)
    } else if a > b {
        if a == b + 1 {
            let s = t(b)?;
            return Some((1, s + 1, s));
        }
        let left = map_unit(a, b + 1, t)?;
        let right = map_unit(b + 1, b, t)?;
        unit_bracket(left, right)
    } else {
        None
    }
}

/// Θ' on l'_1 (or its inverse on l'_2) acting on explicit matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaPrime {
    pub triple: BDTriple,
    pub size: usize,
}

impl ThetaPrime {
    pub fn new(rs: &RootSystem, triple: &BDTriple) -> Result<Self> {
        let n = rs.type_a_rank().ok_or(Error::NotTypeA)?;
        Ok(ThetaPrime { triple: triple.clone(), size: n + 1 })
    }

    pub fn apply(&self, x: &QMatrix) -> Option<QMatrix> {
        self.apply_with(x, false)
    }

    pub fn apply_inverse(&self, x: &QMatrix) -> Option<QMatrix> {
        self.apply_with(x, true)
    }

    fn apply_with(&self, x: &QMatrix, inverse: bool) -> Option<QMatrix> {
        let n = self.size;
        let mut out = QMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let c = x.get(a, b);
                if a == b || c.is_zero() {
                    continue;
                }
                let (s, p, r) = if inverse {
                    tau_inv_unit(&self.triple, a, b)?
                } else {
                    tau_unit(&self.triple, a, b)?
                };
                let v = out.get(p, r) + c * q(s);
                out.set(p, r, v);
            }
        }
        // diagonal part: Σ c_i H_i with c_p = d_0 + ... + d_p
        let map: std::collections::BTreeMap<usize, usize> =
            if inverse { self.triple.inverse_tau() } else { self.triple.tau.clone() };
        let mut c = Q::zero();
        for p in 0..n {
            c += x.get(p, p);
            if p + 1 == n {
                if !c.is_zero() {
                    return None;
                }
                break;
            }
            if c.is_zero() {
                continue;
            }
            let t = *map.get(&p)?;
            let v = out.get(t, t) + &c;
            out.set(t, t, v);
            let v = out.get(t + 1, t + 1) - &c;
            out.set(t + 1, t + 1, v);
        }
        Some(out)
    }
}

/// Matrix units E_ab (a ≠ b) for the given root set (root coordinates).
pub fn root_unit_positions(rs: &RootSystem, roots: &[Vec<i64>]) -> Vec<(usize, usize)> {
    let n = rs.type_a_rank().unwrap_or(0);
    roots
        .iter()
        .map(|r| {
            let e = crate::weyl::root_to_e(r, n);
            let a = e.iter().position(|&x| x == 1).expect("type A root");
            let b = e.iter().position(|&x| x == -1).expect("type A root");
            (a, b)
        })
        .collect()
}

/// Levi shape check: zero outside the diagonal blocks cut out by `simple`.
pub fn in_levi(x: &QMatrix, simple: &std::collections::BTreeSet<usize>) -> bool {
    let n = x.rows();
    let block = |i: usize| (0..i).filter(|k| !simple.contains(k)).count();
    (0..n).all(|i| (0..n).all(|j| block(i) == block(j) || x.get(i, j).is_zero()))
}

/// Block-diagonal part with respect to the Levi of `simple`.
pub fn levi_part(x: &QMatrix, simple: &std::collections::BTreeSet<usize>) -> QMatrix {
    let n = x.rows();
    let block = |i: usize| (0..i).filter(|k| !simple.contains(k)).count();
    QMatrix::from_fn(n, n, |i, j| if block(i) == block(j) { x.get(i, j).clone() } else { q(0) })
}

/// Block upper triangular check for the standard parabolic of `simple`.
pub fn in_parabolic(x: &QMatrix, simple: &std::collections::BTreeSet<usize>) -> bool {
    let n = x.rows();
    let block = |i: usize| (0..i).filter(|k| !simple.contains(k)).count();
    (0..n).all(|i| (0..n).all(|j| block(i) <= block(j) || x.get(i, j).is_zero()))
}
