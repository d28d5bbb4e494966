//! r-matrices as sparse tensors over the matrix-unit basis of gl(n+1).

use super::{tau_unit, SignedUnit};
use crate::bdtriple::{assemble_r, BDTriple, CartanTerm};
use crate::error::{Error, Result};
use crate::linalg::{q, qr, QMatrix, Q};
use crate::rootsys::RootSystem;
use crate::weyl::root_to_e;
use num::Zero;
use std::collections::BTreeMap;

/// Σ c · E_{i} ⊗ E_{j}, with E_k the matrix unit at flat index k = row·N + col.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor2 {
    pub size: usize,
    pub coeffs: BTreeMap<(usize, usize), Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    pub size: usize,
    pub coeffs: BTreeMap<(usize, usize, usize), Q>,
}

fn bump<K: Ord>(map: &mut BTreeMap<K, Q>, k: K, c: Q) {
    if c.is_zero() {
        return;
    }
    *map.entry(k).or_insert_with(Q::zero) += c;
}

fn prune<K: Ord + Clone>(map: BTreeMap<K, Q>) -> BTreeMap<K, Q> {
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

impl Tensor2 {
    pub fn zero(size: usize) -> Self {
        Tensor2 { size, coeffs: BTreeMap::new() }
    }

    fn flat(&self, i: usize, j: usize) -> usize {
        i * self.size + j
    }

    /// Adds c · E_{ab} ⊗ E_{cd}.
    pub fn add_units(&mut self, c: Q, (a, b): (usize, usize), (cc, d): (usize, usize)) {
        let k = (self.flat(a, b), self.flat(cc, d));
        bump(&mut self.coeffs, k, c);
        if self.coeffs.get(&k).is_some_and(Zero::is_zero) {
            self.coeffs.remove(&k);
        }
    }

    pub fn add(&self, other: &Tensor2) -> Tensor2 {
        let mut out = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            bump(&mut out, *k, v.clone());
        }
        Tensor2 { size: self.size, coeffs: prune(out) }
    }

    pub fn scale(&self, c: &Q) -> Tensor2 {
        Tensor2 { size: self.size, coeffs: prune(self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect()) }
    }

    pub fn flip(&self) -> Tensor2 {
        Tensor2 { size: self.size, coeffs: self.coeffs.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Zero::is_zero)
    }

    /// Dense (N²)×(N²) coefficient matrix.
    pub fn to_matrix(&self) -> QMatrix {
        let d = self.size * self.size;
        let mut m = QMatrix::zeros(d, d);
        for (&(i, j), v) in &self.coeffs {
            m.set(i, j, v.clone());
        }
        m
    }

    /// Both legs traceless: contracting either leg with the identity gives zero.
    pub fn legs_traceless(&self) -> bool {
        let n = self.size;
        let mut first: BTreeMap<usize, Q> = BTreeMap::new();
        let mut second: BTreeMap<usize, Q> = BTreeMap::new();
        for (&(i, j), v) in &self.coeffs {
            if i / n == i % n {
                bump(&mut first, j, v.clone());
            }
            if j / n == j % n {
                bump(&mut second, i, v.clone());
            }
        }
        first.values().all(Zero::is_zero) && second.values().all(Zero::is_zero)
    }
}

impl Tensor3 {
    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Zero::is_zero)
    }

    pub fn nonzero_terms(&self) -> usize {
        self.coeffs.values().filter(|v| !v.is_zero()).count()
    }
}

/// Casimir of the trace form on sl(N): Σ E_ij ⊗ E_ji - (1/N) I ⊗ I.
pub fn casimir(size: usize) -> Tensor2 {
    let mut t = Tensor2::zero(size);
    for i in 0..size {
        for j in 0..size {
            t.add_units(q(1), (i, j), (j, i));
            t.add_units(-qr(1, size as i64), (i, i), (j, j));
        }
    }
    t
}

/// Positions (a, b) of the matrix unit for a positive root.
fn positive_unit(root: &[i64], n: usize) -> (usize, usize) {
    let e = root_to_e(root, n);
    let a = e.iter().position(|&x| x == 1).expect("type A root");
    let b = e.iter().position(|&x| x == -1).expect("type A root");
    (a, b)
}

/// x_β as the image of x_α under the k-th power of the τ-homomorphism.
fn iterate_unit(triple: &BDTriple, from: (usize, usize), to: (usize, usize)) -> Result<SignedUnit> {
    let mut cur: SignedUnit = (1, from.0, from.1);
    loop {
        let (s, a, b) = tau_unit(triple, cur.1, cur.2)
            .ok_or_else(|| Error::Internal(format!("E_{}{} leaves l1 before reaching the target", cur.1, cur.2)))?;
        cur = (cur.0 * s, a, b);
        if (a, b) == to {
            return Ok(cur);
        }
    }
}

/// Concrete r = r0 + Σ x_{-α} ⊗ x_α + Σ_{α<β} x_{-α} ∧ x_β in sl(n+1).
pub fn realize_r(rs: &RootSystem, triple: &BDTriple, r0: &CartanTerm) -> Result<Tensor2> {
    realize_r_parts(rs, triple, r0, true)
}

/// As [`realize_r`], optionally without the wedge terms.
pub fn realize_r_parts(rs: &RootSystem, triple: &BDTriple, r0: &CartanTerm, wedge: bool) -> Result<Tensor2> {
    let n = rs.type_a_rank().ok_or(Error::NotTypeA)?;
    let size = n + 1;
    let abs = assemble_r(rs, triple, r0);
    let mut t = Tensor2::zero(size);
    // r0 with H_i = E_ii - E_{i+1,i+1}
    for i in 0..n {
        for j in 0..n {
            let c = abs.cartan.r0.get(i, j).clone();
            if c.is_zero() {
                continue;
            }
            t.add_units(c.clone(), (i, i), (j, j));
            t.add_units(-c.clone(), (i, i), (j + 1, j + 1));
            t.add_units(-c.clone(), (i + 1, i + 1), (j, j));
            t.add_units(c, (i + 1, i + 1), (j + 1, j + 1));
        }
    }
    for &p in &abs.diagonal_pairs {
        let (a, b) = positive_unit(&rs.positive_roots[p], n);
        t.add_units(q(1), (b, a), (a, b));
    }
    if wedge {
        for &(al, be) in &abs.wedge_pairs {
            let (a, b) = positive_unit(&rs.positive_roots[al], n);
            let target = positive_unit(&rs.positive_roots[be], n);
            let (s, c, d) = iterate_unit(triple, (a, b), target)?;
            t.add_units(q(s), (b, a), (c, d));
            t.add_units(q(-s), (c, d), (b, a));
        }
    }
    Ok(t)
}

/// Brackets of matrix units at flat indices, as a list of (sign, flat index).
fn unit_comm(size: usize, x: usize, y: usize) -> Vec<(i64, usize)> {
    let (p, qq) = (x / size, x % size);
    let (r, s) = (y / size, y % size);
    let mut out = Vec::with_capacity(2);
    if qq == r {
        out.push((1, p * size + s));
    }
    if s == p {
        out.push((-1, r * size + qq));
    }
    out
}

/// [r12, r13] + [r12, r23] + [r13, r23], computed exactly.
pub fn check_cybe(r: &Tensor2) -> Tensor3 {
    let n = r.size;
    let terms: Vec<(usize, usize, &Q)> = r.coeffs.iter().map(|(&(i, j), v)| (i, j, v)).collect();
    let mut out: BTreeMap<(usize, usize, usize), Q> = BTreeMap::new();
    for &(a1, b1, c1) in &terms {
        for &(a2, b2, c2) in &terms {
            let c = c1 * c2;
            for (s, x) in unit_comm(n, a1, a2) {
                bump(&mut out, (x, b1, b2), &c * q(s));
            }
            for (s, x) in unit_comm(n, b1, a2) {
                bump(&mut out, (a1, x, b2), &c * q(s));
            }
            for (s, x) in unit_comm(n, b1, b2) {
                bump(&mut out, (a1, a2, x), &c * q(s));
            }
        }
    }
    Tensor3 { size: n, coeffs: prune(out) }
}

/// r + r21 equals the trace-form Casimir.
pub fn check_symmetric_part(r: &Tensor2) -> bool {
    r.add(&r.flip()) == casimir(r.size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdtriple::{cremmer_gervais, enumerate_triples, solve_r0, R0Mode};

    fn canonical(rs: &RootSystem, t: &BDTriple) -> CartanTerm {
        solve_r0(rs, t, &R0Mode::Canonical).unwrap()
    }

    #[test]
    fn sl2_standard_terms() {
        let rs = RootSystem::build("A1").unwrap();
        let t = BDTriple::trivial();
        let r = realize_r(&rs, &t, &canonical(&rs, &t)).unwrap();
        // (1/4) h ⊗ h + f ⊗ e
        let mut expect = Tensor2::zero(2);
        for (a, b, s) in [(0, 0, 1), (0, 1, -1), (1, 0, -1), (1, 1, 1)] {
            expect.add_units(qr(s, 4), (a, a), (b, b));
        }
        expect.add_units(q(1), (1, 0), (0, 1));
        assert_eq!(r, expect);
        assert!(r.legs_traceless());
        assert!(check_cybe(&r).is_zero());
        assert!(check_symmetric_part(&r));
    }

    #[test]
    fn cg_sl3_has_one_wedge_pair() {
        let rs = RootSystem::build("A2").unwrap();
        let t = cremmer_gervais(&rs).unwrap();
        let r0 = canonical(&rs, &t);
        let with = realize_r(&rs, &t, &r0).unwrap();
        let without = realize_r_parts(&rs, &t, &r0, false).unwrap();
        assert_eq!(with.coeffs.len() - without.coeffs.len(), 2);
        assert!(check_cybe(&with).is_zero());
        // without the wedge this is the trivial-triple r-matrix for the same
        // r0, which solves CYBE for any r0 with r0 + r0_21 = Ω0
        assert!(check_cybe(&without).is_zero());
        let wedge = with.add(&without.scale(&q(-1)));
        let flipped = without.add(&wedge.scale(&q(-1)));
        // conjugation by diag(1, i, 1) negates the only wedge and fixes the rest
        assert!(check_cybe(&flipped).is_zero());
        assert!(check_symmetric_part(&flipped));
    }

    #[test]
    fn cg_wedge_needs_cg_r0() {
        let rs = RootSystem::build("A2").unwrap();
        let t = cremmer_gervais(&rs).unwrap();
        let std_r0 = canonical(&rs, &BDTriple::trivial());
        let r = realize_r(&rs, &t, &std_r0).unwrap();
        assert!(check_symmetric_part(&r));
        assert!(!check_cybe(&r).is_zero());
    }

    #[test]
    fn doubled_r0_breaks_symmetric_part() {
        let rs = RootSystem::build("A2").unwrap();
        let t = cremmer_gervais(&rs).unwrap();
        let mut r0 = canonical(&rs, &t);
        r0.r0 = r0.r0.scale(&q(2));
        assert!(!check_symmetric_part(&realize_r(&rs, &t, &r0).unwrap()));
    }

    #[test]
    fn all_triples_on_a2_solve_cybe() {
        let rs = RootSystem::build("A2").unwrap();
        for t in enumerate_triples(&rs) {
            let r = realize_r(&rs, &t, &canonical(&rs, &t)).unwrap();
            assert!(check_cybe(&r).is_zero(), "{}", t.tau_pairs_string());
            assert!(check_symmetric_part(&r));
        }
    }

    #[test]
    fn non_type_a_is_rejected() {
        let rs = RootSystem::build("B2").unwrap();
        let t = BDTriple::trivial();
        assert!(matches!(realize_r(&rs, &t, &canonical(&rs, &t)), Err(Error::NotTypeA)));
    }
}
