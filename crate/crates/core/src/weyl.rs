//! Weyl group elements as integer matrices, parabolic subgroups, and
//! minimal length (double) coset representatives.

use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix};
use crate::rootsys::RootSystem;
use num::Zero;
use std::collections::{BTreeSet, HashMap, VecDeque};

pub const DEFAULT_WEYL_BOUND: usize = 1_000_000;
pub const WEYL_BOUND_ENV: &str = "LEAFATLAS_WEYL_BOUND";

pub fn weyl_bound() -> usize {
    std::env::var(WEYL_BOUND_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_WEYL_BOUND)
}

/// Element of W acting on semisimple simple-root coordinates (row-major).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    matrix: Vec<i64>,
    rank: usize,
    length: usize,
}

fn is_negative(v: &[i64]) -> bool {
    v.iter().sum::<i64>() < 0
}

impl WeylElement {
    pub fn identity(rs: &RootSystem) -> Self {
        let r = rs.ss_rank;
        let mut m = vec![0; r * r];
        for i in 0..r {
            m[i * r + i] = 1;
        }
        WeylElement { matrix: m, rank: r, length: 0 }
    }

    pub fn simple_reflection(rs: &RootSystem, i: usize) -> Self {
        let r = rs.ss_rank;
        let mut m = vec![0; r * r];
        for j in 0..r {
            let img = rs.reflect(i, &rs.simple_root(j));
            for k in 0..r {
                m[k * r + j] = img[k];
            }
        }
        WeylElement { matrix: m, rank: r, length: 1 }
    }

    /// Builds an element from its matrix, validating that it permutes roots.
    pub fn from_matrix(rs: &RootSystem, matrix: Vec<i64>) -> Result<Self> {
        let r = rs.ss_rank;
        if matrix.len() != r * r {
            return Err(Error::DimensionMismatch { expected: r * r, got: matrix.len() });
        }
        let mut w = WeylElement { matrix, rank: r, length: 0 };
        let mut len = 0;
        for root in &rs.positive_roots {
            let img = w.apply(root);
            if !rs.is_root(&img) {
                return Err(Error::Parse("matrix does not permute the roots".into()));
            }
            if is_negative(&img) {
                len += 1;
            }
        }
        w.length = len;
        Ok(w)
    }

    pub fn from_word(rs: &RootSystem, word: &[usize]) -> Result<Self> {
        let mut w = Self::identity(rs);
        for &i in word {
            rs.simple_index_check(i)?;
            w = w.mul(rs, &Self::simple_reflection(rs, i));
        }
        Ok(w)
    }

    pub fn matrix(&self) -> &[i64] {
        &self.matrix
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    fn raw_mul(&self, other: &WeylElement) -> Vec<i64> {
        let r = self.rank;
        let mut m = vec![0; r * r];
        for i in 0..r {
            for k in 0..r {
                let a = self.matrix[i * r + k];
                if a == 0 {
                    continue;
                }
                for j in 0..r {
                    m[i * r + j] += a * other.matrix[k * r + j];
                }
            }
        }
        m
    }

    /// Composition `self ∘ other`.
    pub fn mul(&self, rs: &RootSystem, other: &WeylElement) -> WeylElement {
        let m = self.raw_mul(other);
        let mut w = WeylElement { matrix: m, rank: self.rank, length: 0 };
        w.length = w.compute_length(rs);
        w
    }

    pub fn inverse(&self, rs: &RootSystem) -> WeylElement {
        let m = QMatrix::from_fn(self.rank, self.rank, |i, j| q(self.matrix[i * self.rank + j]));
        let inv = m.inverse().expect("Weyl matrices are invertible");
        let mat = inv
            .entries()
            .iter()
            .map(|x| {
                assert!(x.is_integer());
                i64::try_from(x.to_integer()).expect("small entries")
            })
            .collect();
        let _ = rs;
        WeylElement { matrix: mat, rank: self.rank, length: self.length }
    }

    fn compute_length(&self, rs: &RootSystem) -> usize {
        rs.positive_roots.iter().filter(|r| is_negative(&self.apply(r))).count()
    }

    /// Action on a vector in h* coordinates. Torus coordinates are fixed.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let r = self.rank;
        let mut out = v.to_vec();
        for i in 0..r {
            let mut s = 0;
            for j in 0..r {
                s += self.matrix[i * r + j] * v[j];
            }
            out[i] = s;
        }
        out
    }

    /// Matrix of the action on h (= h* by the form), torus block identity.
    pub fn on_h(&self, rs: &RootSystem) -> QMatrix {
        let n = rs.cartan_rank;
        QMatrix::from_fn(n, n, |i, j| {
            if i < self.rank && j < self.rank {
                q(self.matrix[i * self.rank + j])
            } else if i == j {
                q(1)
            } else {
                q(0)
            }
        })
    }

    /// True when w(α_i) is a negative root.
    pub fn has_right_descent(&self, rs: &RootSystem, i: usize) -> bool {
        is_negative(&self.apply(&rs.simple_root(i)))
    }

    /// A reduced word (zero-based simple indices), lexicographically first by
    /// peeling right descents with the smallest index.
    pub fn reduced_word(&self, rs: &RootSystem) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::new();
        while w.length > 0 {
            let i = (0..rs.ss_rank).find(|&i| w.has_right_descent(rs, i)).expect("descent exists");
            w = w.mul(rs, &WeylElement::simple_reflection(rs, i));
            word.push(i);
        }
        word.reverse();
        word
    }

    pub fn word_string(&self, rs: &RootSystem) -> String {
        let w = self.reduced_word(rs);
        if w.is_empty() {
            "e".to_string()
        } else {
            w.iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join("")
        }
    }

    /// One-line permutation (zero-based images) for type A_n.
    pub fn to_permutation(&self, rs: &RootSystem) -> Option<Vec<usize>> {
        let n = rs.type_a_rank()?;
        let mut perm = vec![0; n + 1];
        for i in 0..n {
            let img = self.apply(&rs.simple_root(i));
            let e = root_to_e(&img, n);
            let plus = e.iter().position(|&x| x == 1)?;
            let minus = e.iter().position(|&x| x == -1)?;
            if i == 0 {
                perm[0] = plus;
            }
            perm[i + 1] = minus;
        }
        Some(perm)
    }

    pub fn from_permutation(rs: &RootSystem, perm: &[usize]) -> Result<Self> {
        let n = rs.type_a_rank().ok_or(Error::NotTypeA)?;
        if perm.len() != n + 1 {
            return Err(Error::DimensionMismatch { expected: n + 1, got: perm.len() });
        }
        let mut m = vec![0; n * n];
        for j in 0..n {
            let col = e_diff_to_root(perm[j], perm[j + 1], n);
            for i in 0..n {
                m[i * n + j] = col[i];
            }
        }
        Self::from_matrix(rs, m)
    }
}

/// Root coordinates of e_a - e_b in A_n (zero-based positions).
pub fn e_diff_to_root(a: usize, b: usize, n: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
    for x in v.iter_mut().take(hi).skip(lo) {
        *x = s;
    }
    v
}

/// e-coordinates (length n+1) of a root-lattice vector of A_n.
pub fn root_to_e(v: &[i64], n: usize) -> Vec<i64> {
    (0..=n)
        .map(|p| {
            let cur = if p < n { v[p] } else { 0 };
            let prev = if p > 0 { v[p - 1] } else { 0 };
            cur - prev
        })
        .collect()
}

/// Enumerates W by breadth-first closure; sorted lexicographically by matrix.
pub fn enumerate_weyl(rs: &RootSystem) -> Result<Vec<WeylElement>> {
    enumerate_generated(rs, &(0..rs.ss_rank).collect())
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Order of an irreducible Weyl group, identified by its rank and number of
/// positive roots. B_n and C_n share an order, as do A_3 and D_3.
fn irreducible_order(rank: usize, npos: usize) -> u128 {
    let r = rank as u128;
    match (rank, npos) {
        (2, 6) => 12,
        (4, 24) => 1152,
        (6, 36) => 51840,
        (7, 63) => 2_903_040,
        (8, 120) => 696_729_600,
        _ if npos == rank * (rank + 1) / 2 => factorial(rank + 1),
        _ if npos == rank * rank => (1u128 << r) * factorial(rank),
        _ if npos == rank * (rank - 1) => (1u128 << (r - 1)) * factorial(rank),
        _ => unreachable!("not a reduced irreducible root system"),
    }
}

/// |W_I| from the connected components of the Dynkin subdiagram on I.
pub fn parabolic_order(rs: &RootSystem, gens: &BTreeSet<usize>) -> u128 {
    let mut left: BTreeSet<usize> = gens.clone();
    let mut order = 1u128;
    while let Some(&start) = left.iter().next() {
        let mut comp = BTreeSet::from([start]);
        let mut stack = vec![start];
        left.remove(&start);
        while let Some(a) = stack.pop() {
            let nbrs: Vec<usize> = left
                .iter()
                .copied()
                .filter(|&b| !rs.pair_int(&rs.simple_root(a), &rs.simple_root(b)).is_zero())
                .collect();
            for b in nbrs {
                left.remove(&b);
                comp.insert(b);
                stack.push(b);
            }
        }
        let npos = rs.subsystem_positive(&comp).len();
        order *= irreducible_order(comp.len(), npos);
    }
    order
}

fn enumerate_generated(rs: &RootSystem, gens: &BTreeSet<usize>) -> Result<Vec<WeylElement>> {
    let bound = weyl_bound();
    if parabolic_order(rs, gens) > bound as u128 {
        return Err(Error::WeylBoundExceeded(bound));
    }
    let id = WeylElement::identity(rs);
    let refl: Vec<(usize, WeylElement)> =
        gens.iter().map(|&i| (i, WeylElement::simple_reflection(rs, i))).collect();
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut out = vec![id.clone()];
    seen.insert(id.matrix.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        let w = out[k].clone();
        for (i, s) in &refl {
            let m = w.raw_mul(s);
            if seen.contains_key(&m) {
                continue;
            }
            // l(w s_i) = l(w) ± 1 depending on the sign of w(α_i)
            let len = if w.has_right_descent(rs, *i) { w.length - 1 } else { w.length + 1 };
            let e = WeylElement { matrix: m.clone(), rank: w.rank, length: len };
            seen.insert(m, out.len());
            out.push(e);
            queue.push_back(out.len() - 1);
            if out.len() > bound {
                return Err(Error::WeylBoundExceeded(bound));
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicSubgroup {
    pub generators: BTreeSet<usize>,
    elements: Option<Vec<WeylElement>>,
}

impl ParabolicSubgroup {
    pub fn new(rs: &RootSystem, generators: impl IntoIterator<Item = usize>) -> Result<Self> {
        let generators: BTreeSet<usize> = generators.into_iter().collect();
        for &g in &generators {
            rs.simple_index_check(g)?;
        }
        Ok(ParabolicSubgroup { generators, elements: None })
    }

    pub fn trivial() -> Self {
        ParabolicSubgroup { generators: BTreeSet::new(), elements: None }
    }

    pub fn full(rs: &RootSystem) -> Self {
        ParabolicSubgroup { generators: (0..rs.ss_rank).collect(), elements: None }
    }

    pub fn elements(&mut self, rs: &RootSystem) -> Result<&[WeylElement]> {
        if self.elements.is_none() {
            self.elements = Some(enumerate_generated(rs, &self.generators)?);
        }
        Ok(self.elements.as_deref().unwrap())
    }

    /// Enumerated elements without caching.
    pub fn enumerate(&self, rs: &RootSystem) -> Result<Vec<WeylElement>> {
        match &self.elements {
            Some(e) => Ok(e.clone()),
            None => enumerate_generated(rs, &self.generators),
        }
    }

    pub fn contains(&self, rs: &RootSystem, w: &WeylElement) -> bool {
        // w ∈ W_I iff stripping right descents in I reaches the identity
        let mut x = w.clone();
        loop {
            if x.is_identity() {
                return true;
            }
            match self.generators.iter().find(|&&i| x.has_right_descent(rs, i)) {
                Some(&i) => x = x.mul(rs, &WeylElement::simple_reflection(rs, i)),
                None => return false,
            }
        }
    }
}

/// Unique maximal-length element of a parabolic subgroup.
pub fn longest_element(rs: &RootSystem, parabolic: &ParabolicSubgroup) -> WeylElement {
    let mut w = WeylElement::identity(rs);
    loop {
        let next = parabolic.generators.iter().find(|&&i| !w.has_right_descent(rs, i));
        match next {
            Some(&i) => w = w.mul(rs, &WeylElement::simple_reflection(rs, i)),
            None => return w,
        }
    }
}

/// u^max_i = w^max (w^max_i)^{-1}.
pub fn u_max(rs: &RootSystem, parabolic: &ParabolicSubgroup) -> WeylElement {
    let wmax = longest_element(rs, &ParabolicSubgroup::full(rs));
    let wi = longest_element(rs, parabolic);
    wmax.mul(rs, &wi.inverse(rs))
}

/// Criterion (*): w^{-1}(α) > 0 for simple α of the left side and
/// w(β) > 0 for simple β of the right side.
pub fn satisfies_min_criterion(
    rs: &RootSystem,
    w: &WeylElement,
    left: &ParabolicSubgroup,
    right: &ParabolicSubgroup,
) -> bool {
    let winv = w.inverse(rs);
    left.generators.iter().all(|&i| !winv.has_right_descent(rs, i))
        && right.generators.iter().all(|&j| !w.has_right_descent(rs, j))
}

pub fn minimal_coset_reps(
    rs: &RootSystem,
    left: &ParabolicSubgroup,
    right: &ParabolicSubgroup,
) -> Result<Vec<WeylElement>> {
    let all = enumerate_weyl(rs)?;
    Ok(all.into_iter().filter(|w| satisfies_min_criterion(rs, w, left, right)).collect())
}

/// Minimal representative of W_left u W_right by descent.
pub fn min_double_rep(
    rs: &RootSystem,
    u: &WeylElement,
    left: &ParabolicSubgroup,
    right: &ParabolicSubgroup,
) -> WeylElement {
    let mut w = u.clone();
    loop {
        let winv = w.inverse(rs);
        if let Some(&i) = left.generators.iter().find(|&&i| winv.has_right_descent(rs, i)) {
            w = WeylElement::simple_reflection(rs, i).mul(rs, &w);
            continue;
        }
        if let Some(&j) = right.generators.iter().find(|&&j| w.has_right_descent(rs, j)) {
            w = w.mul(rs, &WeylElement::simple_reflection(rs, j));
            continue;
        }
        return w;
    }
}

/// Simple roots of W^w = W_left ∩ w W_right w^{-1} for a minimal double
/// coset representative w.
pub fn stabilizer_generators(
    rs: &RootSystem,
    w: &WeylElement,
    left: &ParabolicSubgroup,
    right: &ParabolicSubgroup,
) -> BTreeSet<usize> {
    let winv = w.inverse(rs);
    left.generators
        .iter()
        .copied()
        .filter(|&i| {
            let img = winv.apply(&rs.simple_root(i));
            right.generators.iter().any(|&j| img == rs.simple_root(j))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinDecomposition {
    pub w1: WeylElement,
    pub w: WeylElement,
    pub w2: WeylElement,
    /// Generators of W^w.
    pub stabilizer: BTreeSet<usize>,
}

/// u = w1 w w2 with w minimal in W1 u W2, w1 minimal in W1 / W^w, w2 ∈ W2,
/// and l(u) = l(w1) + l(w) + l(w2).
pub fn decompose_min(
    rs: &RootSystem,
    u: &WeylElement,
    left: &ParabolicSubgroup,
    right: &ParabolicSubgroup,
) -> Result<MinDecomposition> {
    let w = min_double_rep(rs, u, left, right);
    // minimal representative of u W2
    let mut x = u.clone();
    while let Some(&j) = right.generators.iter().find(|&&j| x.has_right_descent(rs, j)) {
        x = x.mul(rs, &WeylElement::simple_reflection(rs, j));
    }
    let w2 = x.inverse(rs).mul(rs, u);
    let w1 = x.mul(rs, &w.inverse(rs));
    let stabilizer = stabilizer_generators(rs, &w, left, right);
    let ok = w1.length() + w.length() + w2.length() == u.length()
        && left.contains(rs, &w1)
        && right.contains(rs, &w2)
        && w1.mul(rs, &w).mul(rs, &w2) == *u;
    if !ok {
        return Err(Error::Internal("decompose_min produced a non-additive factorization".into()));
    }
    Ok(MinDecomposition { w1, w, w2, stabilizer })
}
