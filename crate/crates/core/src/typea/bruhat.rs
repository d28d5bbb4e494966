//! Bruhat decomposition G = ⊔ P1 ẇ P2 by exact elimination.

use super::{dot_perm, dot_w, in_parabolic};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Q};
use crate::rootsys::RootSystem;
use crate::weyl::{decompose_min, ParabolicSubgroup, WeylElement};
use num::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruhatDecomposition {
    pub p1: QMatrix,
    pub w: WeylElement,
    pub w_dot: QMatrix,
    pub p2: QMatrix,
}

/// g = b1 · ẇ · b2 with b1 upper unitriangular and b2 upper triangular.
/// Returns (b1, permutation, b2).
pub fn borel_bruhat(g: &QMatrix) -> Result<(QMatrix, Vec<usize>, QMatrix)> {
    let n = g.rows();
    if !g.is_square() || g.det().is_zero() {
        return Err(Error::Parse("Bruhat decomposition needs an invertible square matrix".into()));
    }
    let mut m = g.clone();
    // row operations accumulate in `left`, column operations in `right`:
    // m = left · g · right throughout
    let mut left = QMatrix::identity(n);
    let mut right = QMatrix::identity(n);
    let mut used = vec![false; n];
    let mut perm = vec![0; n];
    for j in 0..n {
        let i = (0..n)
            .rev()
            .find(|&i| !used[i] && !m.get(i, j).is_zero())
            .ok_or_else(|| Error::Internal("singular column during Bruhat elimination".into()))?;
        used[i] = true;
        perm[j] = i;
        let piv = m.get(i, j).clone();
        for r in 0..i {
            let c = m.get(r, j) / &piv;
            if c.is_zero() {
                continue;
            }
            row_axpy(&mut m, r, i, &c);
            row_axpy(&mut left, r, i, &c);
        }
        for cc in j + 1..n {
            let c = m.get(i, cc) / &piv;
            if c.is_zero() {
                continue;
            }
            col_axpy(&mut m, cc, j, &c);
            col_axpy(&mut right, cc, j, &c);
        }
    }
    let w_dot = dot_perm(&perm);
    let t = w_dot.inverse().expect("permutation").mul(&m);
    let b1 = left.inverse().expect("unitriangular");
    let b2 = t.mul(&right.inverse().expect("unitriangular"));
    Ok((b1, perm, b2))
}

fn row_axpy(m: &mut QMatrix, target: usize, src: usize, c: &Q) {
    for k in 0..m.cols() {
        let v = m.get(target, k) - c * m.get(src, k);
        m.set(target, k, v);
    }
}

fn col_axpy(m: &mut QMatrix, target: usize, src: usize, c: &Q) {
    for k in 0..m.rows() {
        let v = m.get(k, target) - c * m.get(k, src);
        m.set(k, target, v);
    }
}

/// g = p1 · ẇ · p2 with p1 ∈ P_left, p2 ∈ P_right (standard block upper
/// parabolics) and w minimal in W_left \ W / W_right.
pub fn bruhat_decompose(
    rs: &RootSystem,
    g: &QMatrix,
    left: &ParabolicSubgroup,
    right: &ParabolicSubgroup,
) -> Result<BruhatDecomposition> {
    let n = rs.type_a_rank().ok_or(Error::NotTypeA)?;
    if g.rows() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, got: g.rows() });
    }
    let (b1, perm, _) = borel_bruhat(g)?;
    let full = WeylElement::from_permutation(rs, &perm)?;
    let md = decompose_min(rs, &full, left, right)?;
    let p1 = b1.mul(&dot_w(rs, &md.w1)?);
    let w_dot = dot_w(rs, &md.w)?;
    let p2 = w_dot.inverse().expect("monomial").mul(&p1.inverse().expect("invertible")).mul(g);
    if !in_parabolic(&p1, &left.generators) || !in_parabolic(&p2, &right.generators) {
        return Err(Error::Internal("Bruhat factors left their parabolics".into()));
    }
    Ok(BruhatDecomposition { p1, w: md.w, w_dot, p2 })
}

/// rank of rows i.., columns ..=j of a matrix in B ẇ B equals
/// #{k ≤ j : σ(k) ≥ i}.
pub fn rank_profile(g: &QMatrix) -> Vec<Vec<usize>> {
    let n = g.rows();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| g.submatrix(&(i..n).collect::<Vec<_>>(), &(0..=j).collect::<Vec<_>>()).rank())
                .collect()
        })
        .collect()
}

pub fn perm_rank_profile(perm: &[usize]) -> Vec<Vec<usize>> {
    let n = perm.len();
    (0..n).map(|i| (0..n).map(|j| (0..=j).filter(|&k| perm[k] >= i).count()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use crate::weyl::{enumerate_weyl, longest_element};

    fn is_upper(m: &QMatrix) -> bool {
        (0..m.rows()).all(|i| (0..i).all(|j| m.get(i, j).is_zero()))
    }

    #[test]
    fn permutation_matrices_recover_w() {
        let rs = RootSystem::build("A3").unwrap();
        let b = ParabolicSubgroup::trivial();
        for w in enumerate_weyl(&rs).unwrap() {
            let g = dot_w(&rs, &w).unwrap();
            let d = bruhat_decompose(&rs, &g, &b, &b).unwrap();
            assert_eq!(d.w, w);
            assert_eq!(d.p1.mul(&d.w_dot).mul(&d.p2), g);
        }
    }

    #[test]
    fn identity_gives_identity() {
        let rs = RootSystem::build("A2").unwrap();
        let b = ParabolicSubgroup::trivial();
        let d = bruhat_decompose(&rs, &QMatrix::identity(3), &b, &b).unwrap();
        assert!(d.w.is_identity());
    }

    #[test]
    fn generic_matrix_lands_in_big_cell() {
        let rs = RootSystem::build("A2").unwrap();
        let g = QMatrix::from_i64(3, 3, &[1, 1, 1, 1, 2, 1, 1, 1, 2]);
        assert_eq!(g.det(), q(1));
        let (b1, perm, b2) = borel_bruhat(&g).unwrap();
        assert!(is_upper(&b1) && is_upper(&b2));
        assert_eq!(perm_rank_profile(&perm), rank_profile(&g));
        let b = ParabolicSubgroup::trivial();
        let d = bruhat_decompose(&rs, &g, &b, &b).unwrap();
        assert_eq!(d.w, longest_element(&rs, &ParabolicSubgroup::full(&rs)));
    }

    #[test]
    fn parabolic_factors_are_block_upper() {
        let rs = RootSystem::build("A3").unwrap();
        let g = QMatrix::from_i64(4, 4, &[1, 2, 0, 1, 0, 1, 1, 3, 1, 0, 1, 0, 2, 1, 1, 2]);
        let g = {
            // rescale the first row to force det 1
            let mut h = QMatrix::identity(4);
            h.set(0, 0, q(1) / g.det());
            h.mul(&g)
        };
        let left = ParabolicSubgroup::new(&rs, [0]).unwrap();
        let right = ParabolicSubgroup::new(&rs, [1, 2]).unwrap();
        let d = bruhat_decompose(&rs, &g, &left, &right).unwrap();
        assert_eq!(d.p1.mul(&d.w_dot).mul(&d.p2), g);
        assert!(in_parabolic(&d.p1, &left.generators));
        assert!(in_parabolic(&d.p2, &right.generators));
    }
}
