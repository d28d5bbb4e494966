//! Iterative normalization of a coset representative l·ẇ, l ∈ L1.

use super::bruhat::bruhat_decompose;
use super::{dot_w, in_levi, levi_part};
use crate::bdtriple::BDTriple;
use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix};
use crate::rootsys::RootSystem;
use crate::weyl::{satisfies_min_criterion, ParabolicSubgroup, WeylElement};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedCoset {
    pub v: WeylElement,
    /// Product ẇ^K ... ẇ^1 of the step representatives.
    pub v_dot: QMatrix,
    pub gk: QMatrix,
    /// Simple roots of g^K.
    pub levi: BTreeSet<usize>,
    pub steps: usize,
}

/// How g^{k+1} is assembled from the Levi factors g', g'' of a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepUpdate {
    /// g^{k+1} = Ad_u^{-1}(g'') · g'.
    Product,
    /// g^{k+1} = (Ad_u^{-1}(g''))^{-1} · g'.
    InverseProduct,
}

/// Positions (a, b), a ≠ b, of the Levi of `simple` in sl(size).
fn levi_units(size: usize, simple: &BTreeSet<usize>) -> BTreeSet<(usize, usize)> {
    let block = |i: usize| (0..i).filter(|k| !simple.contains(k)).count();
    let mut out = BTreeSet::new();
    for a in 0..size {
        for b in 0..size {
            if a != b && block(a) == block(b) {
                out.insert((a, b));
            }
        }
    }
    out
}

/// Simple roots of a root set, provided it is the root set of a standard Levi.
fn standard_levi(size: usize, units: &BTreeSet<(usize, usize)>) -> Result<BTreeSet<usize>> {
    let simple: BTreeSet<usize> = (0..size - 1).filter(|&i| units.contains(&(i, i + 1))).collect();
    if levi_units(size, &simple) != *units {
        return Err(Error::Internal("intermediate subalgebra is not a standard Levi".into()));
    }
    Ok(simple)
}

pub fn normalize_coset(rs: &RootSystem, triple: &BDTriple, l: &QMatrix, w: &WeylElement) -> Result<NormalizedCoset> {
    normalize_coset_with(rs, triple, l, w, StepUpdate::Product)
}

pub fn normalize_coset_with(
    rs: &RootSystem,
    triple: &BDTriple,
    l: &QMatrix,
    w: &WeylElement,
    update: StepUpdate,
) -> Result<NormalizedCoset> {
    let n = rs.type_a_rank().ok_or(Error::NotTypeA)?;
    let size = n + 1;
    if l.rows() != size || !l.is_square() {
        return Err(Error::DimensionMismatch { expected: size, got: l.rows() });
    }
    if l.det() != q(1) || !in_levi(l, &triple.gamma1) {
        return Err(Error::NotInLevi("l must lie in L1 with det 1".into()));
    }
    let w1 = ParabolicSubgroup::new(rs, triple.gamma1.iter().copied())?;
    if !satisfies_min_criterion(rs, w, &w1, &w1) {
        return Err(Error::NotMinimalRep(w.word_string(rs)));
    }
    let mut levi = triple.gamma1.clone();
    let mut g = l.clone();
    let mut u = w.clone();
    let mut u_dot = dot_w(rs, w)?;
    for steps in 1..=size + 1 {
        let perm = u.to_permutation(rs).ok_or(Error::NotTypeA)?;
        let units = levi_units(size, &levi);
        let next: BTreeSet<(usize, usize)> =
            units.iter().copied().filter(|&(a, b)| units.contains(&(perm[a], perm[b]))).collect();
        if next.len() == units.len() {
            return Ok(NormalizedCoset { v: u, v_dot: u_dot, gk: g, levi, steps });
        }
        let bar: BTreeSet<(usize, usize)> = next.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        let i_set = standard_levi(size, &next)?;
        let j_set = standard_levi(size, &bar)?;
        let left = ParabolicSubgroup::new(rs, i_set.iter().copied())?;
        let right = ParabolicSubgroup::new(rs, j_set.iter().copied())?;
        let d = bruhat_decompose(rs, &g, &left, &right)?;
        let g1 = levi_part(&d.p1, &i_set);
        let g2 = levi_part(&d.p2, &j_set);
        let u_inv = u_dot.inverse().expect("monomial");
        let pulled = u_inv.mul(&g2).mul(&u_dot);
        g = match update {
            StepUpdate::Product => pulled.mul(&g1),
            StepUpdate::InverseProduct => pulled.inverse().expect("invertible").mul(&g1),
        };
        if !in_levi(&g, &i_set) {
            return Err(Error::Internal("g^{k+1} left G^{k+1}".into()));
        }
        u = d.w.mul(rs, &u);
        u_dot = d.w_dot.mul(&u_dot);
        levi = i_set;
    }
    Err(Error::Internal("normalization did not stabilize".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdtriple::cremmer_gervais;
    use crate::weyl::minimal_coset_reps;

    fn cg_l(a: [i64; 4]) -> QMatrix {
        let m = QMatrix::from_i64(2, 2, &a);
        let d = m.det();
        let mut l = QMatrix::identity(3);
        for r in 0..2 {
            for c in 0..2 {
                l.set(r, c, m.get(r, c).clone());
            }
        }
        l.set(2, 2, q(1) / d);
        l
    }

    #[test]
    fn identity_w_stops_at_once() {
        let rs = RootSystem::build("A2").unwrap();
        let t = cremmer_gervais(&rs).unwrap();
        let l = cg_l([2, 1, 1, 1]);
        let out = normalize_coset(&rs, &t, &l, &WeylElement::identity(&rs)).unwrap();
        assert!(out.v.is_identity());
        assert_eq!(out.gk, l);
        assert_eq!(out.steps, 1);
    }

    #[test]
    fn standard_structure_takes_one_step() {
        let rs = RootSystem::build("A2").unwrap();
        let t = BDTriple::trivial();
        let h = QMatrix::diag(&[q(2), q(3), crate::linalg::qr(1, 6)]);
        for w in crate::weyl::enumerate_weyl(&rs).unwrap() {
            let out = normalize_coset(&rs, &t, &h, &w).unwrap();
            assert_eq!(out.v, w);
            assert_eq!(out.gk, h);
            assert_eq!(out.steps, 1);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let rs = RootSystem::build("A2").unwrap();
        let t = cremmer_gervais(&rs).unwrap();
        let mut l = QMatrix::identity(3);
        l.set(0, 2, q(1));
        let e = WeylElement::identity(&rs);
        assert!(matches!(normalize_coset(&rs, &t, &l, &e), Err(Error::NotInLevi(_))));
        let s1 = WeylElement::simple_reflection(&rs, 0);
        assert!(matches!(
            normalize_coset(&rs, &t, &QMatrix::identity(3), &s1),
            Err(Error::NotMinimalRep(_))
        ));
    }

    #[test]
    fn cg_sl3_outputs_are_cycles() {
        let rs = RootSystem::build("A2").unwrap();
        let t = cremmer_gervais(&rs).unwrap();
        let w1 = ParabolicSubgroup::new(&rs, [0]).unwrap();
        let allowed: Vec<WeylElement> = (0..=2)
            .map(|j| WeylElement::from_permutation(&rs, &super::super::orbit::cg_sigma1(2, j)).unwrap())
            .collect();
        for w in minimal_coset_reps(&rs, &w1, &w1).unwrap() {
            for a in [[2, 1, 1, 1], [1, 3, 0, 1], [0, 1, -1, 0], [1, 0, 2, 1]] {
                let out = normalize_coset(&rs, &t, &cg_l(a), &w).unwrap();
                assert!(allowed.contains(&out.v), "w = {}, v = {}", w.word_string(&rs), out.v.word_string(&rs));
            }
        }
    }
}
