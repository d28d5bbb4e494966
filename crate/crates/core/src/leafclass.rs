//! Leaf and double coset classification data for G- and G, and the
//! discrete group Σ.

use crate::bdtriple::BDTriple;
use crate::decomp::{full_h_predicate, Decomposition};
use crate::error::{Error, Result};
use crate::linalg::{int_vec, q, QMatrix, Subspace, Q};
use crate::rootsys::{Lattice, RootSystem};
use crate::weyl::{
    minimal_coset_reps, min_double_rep, satisfies_min_criterion, ParabolicSubgroup, WeylElement,
};
use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableSubalgebra {
    /// All roots (both signs) of the stable subalgebra, as integer vectors.
    pub root_set: Vec<Vec<i64>>,
    pub derived_dim: usize,
    pub center_dim: usize,
    /// Lie(Z(L^v)) in the G- case, Lie(Z(L_1^{v1,v2})) in the pair case.
    pub lv_center: Subspace,
    /// dim l^v = |roots| + dim((l'_1 ∩ h) ⊕ a_1).
    pub lv_dim: usize,
    pub cong_dim: usize,
    /// Dimension of the abelian factor group.
    pub moduli_dim: usize,
    /// Pair case only: roots of g_2^{v1,v2} = v2 τ(root_set).
    pub partner_roots: Option<Vec<Vec<i64>>>,
    /// Pair case only: dim Z^{v1,v2} as a subspace of h ⊕ h.
    pub z_dim: Option<usize>,
}

impl StableSubalgebra {
    pub fn dim(&self, cartan_rank: usize) -> usize {
        cartan_rank + self.root_set.len()
    }

    /// Sizes of the irreducible blocks of the derived part in type A,
    /// read off as connected simple-root components.
    pub fn simple_roots_in(&self, rs: &RootSystem) -> BTreeSet<usize> {
        (0..rs.ss_rank).filter(|&i| self.root_set.contains(&rs.simple_root(i))).collect()
    }
}

/// `c + d_orb` where d_orb is the twisted-conjugation orbit dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DimExpr {
    pub constant: i64,
}

impl DimExpr {
    pub fn at(&self, d_orb: usize) -> i64 {
        self.constant + d_orb as i64
    }
}

impl fmt::Display for DimExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + d_orb", self.constant)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafRecord {
    /// One element for G-, two (v1, v2) for G.
    pub v: Vec<WeylElement>,
    pub stable: StableSubalgebra,
    /// d_orb ranges over [0, d_orb_max].
    pub d_orb_max: usize,
    pub leaf_dim: DimExpr,
    pub coset_dim: DimExpr,
    /// Simplified full-h formula, present when h^ort_i = 0.
    pub simplified_leaf_dim: Option<DimExpr>,
}

pub fn annihilator(rs: &RootSystem, roots: &[Vec<i64>]) -> Subspace {
    let n = rs.cartan_rank;
    if roots.is_empty() {
        return Subspace::full(n);
    }
    let rows: Vec<Vec<Q>> = roots.iter().map(|r| rs.gram.transpose().mul_vec(&int_vec(r))).collect();
    Subspace::column_space(&QMatrix::from_rows(&rows).nullspace())
}

fn root_rank(roots: &[Vec<i64>], n: usize) -> usize {
    if roots.is_empty() {
        return 0;
    }
    Subspace::span(n, &roots.iter().map(|r| int_vec(r)).collect::<Vec<_>>()).dim()
}

fn levi_roots(rs: &RootSystem, set: &BTreeSet<usize>) -> Vec<Vec<i64>> {
    let pos = rs.subsystem_positive(set);
    let mut all = pos.clone();
    all.extend(pos.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
    all
}

fn in_roots(set: &[Vec<i64>], r: &[i64]) -> bool {
    set.iter().any(|x| x.as_slice() == r)
}

/// Asserts the stable root set is generated by the simple roots it contains.
fn check_simple_generation(rs: &RootSystem, roots: &[Vec<i64>]) -> Result<BTreeSet<usize>> {
    let simples: BTreeSet<usize> =
        (0..rs.ss_rank).filter(|&i| in_roots(roots, &rs.simple_root(i))).collect();
    for r in roots {
        if !RootSystem::support(r).is_subset(&simples) {
            return Err(Error::Internal("stable subalgebra is not generated by simple roots".into()));
        }
    }
    if roots.len() != 2 * rs.subsystem_positive(&simples).len() {
        return Err(Error::Internal("stable root set is not a full Levi subsystem".into()));
    }
    Ok(simples)
}

fn domain1(d: &Decomposition) -> Subspace {
    d.theta_domain_space()
}

fn domain2(d: &Decomposition) -> Subspace {
    d.theta_image_space()
}

pub fn stable_subalgebra_v(
    rs: &RootSystem,
    triple: &BDTriple,
    d: &Decomposition,
    v: &WeylElement,
) -> Result<StableSubalgebra> {
    let n = rs.cartan_rank;
    let w1 = ParabolicSubgroup::new(rs, triple.gamma1.iter().copied())?;
    if !satisfies_min_criterion(rs, v, &ParabolicSubgroup::trivial(), &w1) {
        return Err(Error::NotMinimalRep(v.word_string(rs)));
    }
    let l1 = levi_roots(rs, &triple.gamma1);
    let root_set: Vec<Vec<i64>> = l1
        .iter()
        .filter(|a| {
            let mut cur = v.apply(a);
            while cur != **a {
                if !in_roots(&l1, &cur) {
                    return false;
                }
                cur = v.apply(&cur);
            }
            true
        })
        .cloned()
        .collect();
    let simples = check_simple_generation(rs, &root_set)?;
    let wv = ParabolicSubgroup::new(rs, simples)?;
    if &min_double_rep(rs, v, &wv, &w1) != v {
        return Err(Error::Internal("v is not minimal in W^v v W_1".into()));
    }
    let rk = root_rank(&root_set, n);
    let dom = domain1(d);
    let lv_center = dom.intersect(&annihilator(rs, &root_set));
    let vm = v.on_h(rs);
    let vm1 = vm.sub(&QMatrix::identity(n));
    let cong = lv_center.image(&vm1);
    let hort = d.h_ort1.sum(&d.h_ort1.image(&vm));
    let moduli_dim = (n - rk) - cong.sum(&hort).dim();
    Ok(StableSubalgebra {
        derived_dim: root_set.len() + rk,
        center_dim: n - rk,
        lv_dim: root_set.len() + dom.dim(),
        lv_center,
        cong_dim: cong.dim(),
        moduli_dim,
        root_set,
        partner_roots: None,
        z_dim: None,
    })
}

/// The partial map φ = v1 τ^{-1} v2 τ on roots of l1.
fn phi(
    triple: &BDTriple,
    v1: &WeylElement,
    v2: &WeylElement,
    l1: &[Vec<i64>],
    l2: &[Vec<i64>],
    a: &[i64],
) -> Option<Vec<i64>> {
    if !in_roots(l1, a) {
        return None;
    }
    let b = v2.apply(&triple.tau_vec(a)?);
    if !in_roots(l2, &b) {
        return None;
    }
    Some(v1.apply(&triple.tau_inv_vec(&b)?))
}

fn apply_theta_basis(d: &Decomposition, vs: &[Vec<Q>], inv: bool) -> Result<Vec<Vec<Q>>> {
    vs.iter()
        .map(|x| {
            let r = if inv { d.theta_inv_apply(x) } else { d.theta_apply(x) };
            r.ok_or_else(|| Error::Internal("θ applied outside its domain".into()))
        })
        .collect()
}

/// {(x, M x) : x ∈ space, M x ∈ target} inside h ⊕ h; `swap` puts M x first.
fn graph_subspace(
    n: usize,
    space: &Subspace,
    images: &[Vec<Q>],
    target: &Subspace,
    swap: bool,
) -> Vec<Vec<Q>> {
    if space.dim() == 0 {
        return vec![];
    }
    let m = QMatrix::from_columns(n, images);
    let coeffs = target.preimage(&m);
    let b = space.basis();
    coeffs
        .vectors()
        .iter()
        .map(|c| {
            let x = b.mul_vec(c);
            let y = m.mul_vec(c);
            if swap {
                [y, x].concat()
            } else {
                [x, y].concat()
            }
        })
        .collect()
}

pub fn stable_subalgebra_pair(
    rs: &RootSystem,
    triple: &BDTriple,
    d: &Decomposition,
    v1: &WeylElement,
    v2: &WeylElement,
) -> Result<StableSubalgebra> {
    let n = rs.cartan_rank;
    let w1 = ParabolicSubgroup::new(rs, triple.gamma1.iter().copied())?;
    let w2 = ParabolicSubgroup::new(rs, triple.gamma2.iter().copied())?;
    let triv = ParabolicSubgroup::trivial();
    if !satisfies_min_criterion(rs, v1, &triv, &w1) {
        return Err(Error::NotMinimalRep(v1.word_string(rs)));
    }
    if !satisfies_min_criterion(rs, v2, &triv, &w2) {
        return Err(Error::NotMinimalRep(v2.word_string(rs)));
    }
    let l1 = levi_roots(rs, &triple.gamma1);
    let l2 = levi_roots(rs, &triple.gamma2);
    // φ is injective where defined, so a fully defined forward orbit is a cycle
    let root_set: Vec<Vec<i64>> = l1
        .iter()
        .filter(|a| {
            let mut cur = a.to_vec();
            for _ in 0..=l1.len() {
                match phi(triple, v1, v2, &l1, &l2, &cur) {
                    Some(next) if next == **a => return true,
                    Some(next) => cur = next,
                    None => return false,
                }
            }
            false
        })
        .cloned()
        .collect();
    check_simple_generation(rs, &root_set)?;
    let partner: Vec<Vec<i64>> = root_set
        .iter()
        .map(|a| v2.apply(&triple.tau_vec(a).expect("root of l1")))
        .collect();
    check_simple_generation(rs, &partner)?;

    let rk = root_rank(&root_set, n);
    let v1m = v1.on_h(rs);
    let v2m = v2.on_h(rs);
    let dom1 = domain1(d);
    let dom2 = domain2(d);
    let ann1 = annihilator(rs, &root_set);
    let ann2 = annihilator(rs, &partner);
    let z_l1 = dom1.intersect(&ann1);
    let z_l2 = dom2.intersect(&ann2);
    let z_l1bar = dom1.image(&v1m).intersect(&ann1);
    let z_l2bar = dom2.image(&v2m).intersect(&ann2);

    // Z_1 = {(x, v2 θ x)}, Z_2 = {(v1 θ^{-1} y, y)}
    let x_basis = z_l1.vectors();
    let img1: Vec<Vec<Q>> =
        apply_theta_basis(d, &x_basis, false)?.iter().map(|y| v2m.mul_vec(y)).collect();
    let mut zvecs = graph_subspace(n, &z_l1, &img1, &z_l2bar, false);
    let y_basis = z_l2.vectors();
    let img2: Vec<Vec<Q>> =
        apply_theta_basis(d, &y_basis, true)?.iter().map(|x| v1m.mul_vec(x)).collect();
    zvecs.extend(graph_subspace(n, &z_l2, &img2, &z_l1bar, true));
    let hort1 = d.h_ort1.sum(&d.h_ort1.image(&v1m));
    let hort2 = d.h_ort2.sum(&d.h_ort2.image(&v2m));
    for x in hort1.vectors() {
        zvecs.push([x, vec![q(0); n]].concat());
    }
    for y in hort2.vectors() {
        zvecs.push([vec![q(0); n], y].concat());
    }
    let z = Subspace::span(2 * n, &zvecs);
    let dz1 = n - rk;
    let dz2 = n - root_rank(&partner, n);
    let moduli_dim = dz1 + dz2 - z.dim();

    // twisted conjugation T = v1 θ^{-1} v2 θ on the center, when θ is global
    let cong_dim = match &d.theta_full {
        Some(th) => {
            let thinv = th.inverse().expect("θ invertible");
            let t = v1m.mul(&thinv).mul(&v2m).mul(th);
            let c = ann1.image(&t.sub(&QMatrix::identity(n))).dim();
            if c + moduli_dim != dz1 {
                return Err(Error::Internal(format!(
                    "center twist rank {c} disagrees with abelian factor dimension {moduli_dim}"
                )));
            }
            c
        }
        None => dz1 - moduli_dim.min(dz1),
    };
    Ok(StableSubalgebra {
        derived_dim: root_set.len() + rk,
        center_dim: dz1,
        lv_dim: root_set.len() + dom1.dim(),
        lv_center: z_l1,
        cong_dim,
        moduli_dim,
        root_set,
        partner_roots: Some(partner),
        z_dim: Some(z.dim()),
    })
}

fn sort_records(recs: &mut [LeafRecord]) {
    recs.sort_by(|a, b| {
        let ka: Vec<(usize, &[i64])> = a.v.iter().map(|w| (w.length(), w.matrix())).collect();
        let kb: Vec<(usize, &[i64])> = b.v.iter().map(|w| (w.length(), w.matrix())).collect();
        ka.cmp(&kb)
    });
}

/// One record per minimal representative of W/W1.
pub fn classify_gminus(rs: &RootSystem, triple: &BDTriple, d: &Decomposition) -> Result<Vec<LeafRecord>> {
    let w1 = ParabolicSubgroup::new(rs, triple.gamma1.iter().copied())?;
    let reps = minimal_coset_reps(rs, &ParabolicSubgroup::trivial(), &w1)?;
    let full = full_h_predicate(d);
    let hort = d.h_ort1.dim() as i64;
    let mut recs = reps
        .par_iter()
        .map(|v| {
            let s = stable_subalgebra_v(rs, triple, d, v)?;
            let cong_sum = {
                let vm = v.on_h(rs);
                let c = s.lv_center.image(&vm.sub(&QMatrix::identity(rs.cartan_rank)));
                c.sum(&d.h_ort1).sum(&d.h_ort1.image(&vm)).dim() as i64
            };
            let common = d.dim_lprime_a1() as i64 - s.lv_dim as i64 + v.length() as i64 + cong_sum;
            let leaf = DimExpr { constant: common - hort };
            // coset: dim g+ - dim h^ort_1 + dim(l'_1 ⊕ a_1) - dim l^v + l(v) + TC + Cong-term
            let coset = DimExpr { constant: d.dim_gplus() as i64 - hort + common };
            let simplified = full.then(|| DimExpr {
                constant: d.dim_l1() as i64 - s.dim(rs.cartan_rank) as i64
                    + v.length() as i64
                    + s.cong_dim as i64,
            });
            if let Some(sd) = simplified {
                if sd != leaf {
                    return Err(Error::Internal("simplified G- leaf formula disagrees".into()));
                }
            }
            Ok(LeafRecord {
                v: vec![v.clone()],
                d_orb_max: s.root_set.len(),
                stable: s,
                leaf_dim: leaf,
                coset_dim: coset,
                simplified_leaf_dim: simplified,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    sort_records(&mut recs);
    Ok(recs)
}

/// One record per pair of minimal representatives (W/W1) × (W/W2).
pub fn classify_g(
    rs: &RootSystem,
    triple: &BDTriple,
    d: &Decomposition,
    require_simplified: bool,
) -> Result<Vec<LeafRecord>> {
    let full = full_h_predicate(d);
    if require_simplified && !full {
        return Err(Error::SimplifiedPathUnavailable("h^ort_i is nonzero".into()));
    }
    let triv = ParabolicSubgroup::trivial();
    let w1 = ParabolicSubgroup::new(rs, triple.gamma1.iter().copied())?;
    let w2 = ParabolicSubgroup::new(rs, triple.gamma2.iter().copied())?;
    let reps1 = minimal_coset_reps(rs, &triv, &w1)?;
    let reps2 = minimal_coset_reps(rs, &triv, &w2)?;
    let pairs: Vec<(&WeylElement, &WeylElement)> =
        reps1.iter().flat_map(|a| reps2.iter().map(move |b| (a, b))).collect();
    let n = rs.cartan_rank as i64;
    let mut recs = pairs
        .par_iter()
        .map(|&(v1, v2)| {
            let s = stable_subalgebra_pair(rs, triple, d, v1, v2)?;
            let ls = (v1.length() + v2.length()) as i64;
            let leaf = DimExpr {
                constant: d.dim_lprime_a1() as i64 + 2 * d.h_ort1.dim() as i64 - s.derived_dim as i64 + ls
                    - s.moduli_dim as i64,
            };
            let coset = DimExpr { constant: leaf.constant + d.dim_g as i64 };
            let simplified = full.then(|| DimExpr {
                constant: d.dim_l1() as i64 - (n + s.root_set.len() as i64) + ls + s.cong_dim as i64,
            });
            if let Some(sd) = simplified {
                if sd != leaf {
                    return Err(Error::Internal("simplified G leaf formula disagrees".into()));
                }
                let literal = 2 * d.dim_g as i64 - 2 * d.n_plus_roots.len() as i64 - s.derived_dim as i64 + ls
                    - s.moduli_dim as i64;
                if literal != coset.constant {
                    return Err(Error::Internal("coset dimension offset is not dim g".into()));
                }
            }
            Ok(LeafRecord {
                v: vec![v1.clone(), v2.clone()],
                d_orb_max: s.root_set.len(),
                stable: s,
                leaf_dim: leaf,
                coset_dim: coset,
                simplified_leaf_dim: simplified,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    sort_records(&mut recs);
    Ok(recs)
}

/// Finite abelian group ⊕ Z/d_i ⊕ Z^free with d_1 | d_2 | ...
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FiniteAbelianGroup {
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
}

impl FiniteAbelianGroup {
    /// Normalizes arbitrary cyclic orders into invariant-factor form.
    pub fn from_cyclic_orders(orders: &[u64], free_rank: usize) -> Self {
        let mut prime_powers: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for &o in orders {
            let mut m = o;
            let mut p = 2;
            while m > 1 {
                if p * p > m {
                    prime_powers.entry(m).or_default().push(m);
                    break;
                }
                let mut pk = 1;
                while m % p == 0 {
                    m /= p;
                    pk *= p;
                }
                if pk > 1 {
                    prime_powers.entry(p).or_default().push(pk);
                }
                p += 1;
            }
        }
        let len = prime_powers.values().map(|v| v.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for pows in prime_powers.values_mut() {
            pows.sort_unstable();
            // largest powers go to the last factors
            for (k, &pk) in pows.iter().rev().enumerate() {
                factors[len - 1 - k] *= pk;
            }
        }
        FiniteAbelianGroup { invariant_factors: factors, free_rank }
    }

    pub fn order(&self) -> Option<u64> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.invariant_factors.iter().product())
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        let mut i = 0;
        while i < self.invariant_factors.len() {
            let d = self.invariant_factors[i];
            let mut k = 1;
            while i + k < self.invariant_factors.len() && self.invariant_factors[i + k] == d {
                k += 1;
            }
            parts.push(if k == 1 { format!("Z{d}") } else { format!("Z{d}^{k}") });
            i += k;
        }
        write!(f, "{}", parts.join(" x "))
    }
}

/// Diagonal of the Smith normal form of an integer matrix.
pub fn smith_diagonal(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let qt = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let v = &a[i][j] - &qt * &a[t][j];
                        a[i][j] = v;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        done = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let qt = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let v = &row[j] - &qt * &row[t];
                        row[j] = v;
                    }
                    if !a[t][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        done = false;
                    }
                }
            }
            if !done {
                continue;
            }
            // divisibility: pivot must divide the rest of the block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = &a[t][j] + &a[i][j];
                        a[t][j] = v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    while diag.len() < rows.min(cols) {
        diag.push(BigInt::zero());
    }
    diag
}

/// Σ ≅ ker' / (ker' ∩ (1 - θ) ker), ker' = Λ2-enlarged kernel (defaults to ker).
pub fn sigma_group(d: &Decomposition, kernel: &Lattice, lambda2: Option<&Lattice>) -> Result<FiniteAbelianGroup> {
    let theta = d.theta_full.as_ref().ok_or(Error::ThetaMinusOneSingular)?;
    sigma_from_theta(theta, kernel, lambda2)
}

/// Σ for an explicit θ on h.
pub fn sigma_from_theta(theta: &QMatrix, kernel: &Lattice, lambda2: Option<&Lattice>) -> Result<FiniteAbelianGroup> {
    let n = theta.rows();
    let one_minus = QMatrix::identity(n).sub(theta);
    if one_minus.rank() < n {
        return Err(Error::ThetaMinusOneSingular);
    }
    let kp = lambda2.unwrap_or(kernel);
    if kp.basis.rows() != n || kp.basis.cols() != n || kernel.basis.cols() != n {
        return Err(Error::NonCommensurableLattices("lattices must have full rank in h".into()));
    }
    let kp_inv = kp.basis.inverse().expect("independent basis");
    if !kp_inv.mul(&kernel.basis).is_integral() {
        return Err(Error::NonCommensurableLattices("ker' does not contain ker".into()));
    }
    let c = kp_inv.mul(&one_minus).mul(&kernel.basis);
    let den = crate::linalg::common_denominator(c.entries());
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| c.row(i).iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let diag = smith_diagonal(&rows);
    let mut orders = Vec::new();
    let mut free = 0;
    for di in diag {
        if di.is_zero() {
            free += 1;
            continue;
        }
        let ratio = Q::new(di, den.clone());
        let p = ratio.numer().abs();
        if !p.is_one() {
            orders.push(p.to_u64().ok_or_else(|| Error::Internal("Σ factor overflows u64".into()))?);
        }
    }
    Ok(FiniteAbelianGroup::from_cyclic_orders(&orders, free))
}
