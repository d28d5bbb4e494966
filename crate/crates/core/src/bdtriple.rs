//! Belavin-Drinfeld triples, the induced order on positive roots, the Cartan
//! part r0 of the r-matrix, and the recursion that peels off Γ1.

use crate::error::{Error, Result};
use crate::linalg::{fmt_q, q, qr, QMatrix, Q};
use crate::rootsys::RootSystem;
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BDTriple {
    pub gamma1: BTreeSet<usize>,
    pub gamma2: BTreeSet<usize>,
    pub tau: BTreeMap<usize, usize>,
    pub ord_tau: usize,
}

impl BDTriple {
    pub fn trivial() -> Self {
        BDTriple {
            gamma1: BTreeSet::new(),
            gamma2: BTreeSet::new(),
            tau: BTreeMap::new(),
            ord_tau: 0,
        }
    }

    pub fn inverse_tau(&self) -> BTreeMap<usize, usize> {
        self.tau.iter().map(|(&a, &b)| (b, a)).collect()
    }

    /// Linear extension of τ to vectors supported on Γ1.
    pub fn tau_vec(&self, v: &[i64]) -> Option<Vec<i64>> {
        let mut out = vec![0; v.len()];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            out[*self.tau.get(&i)?] += c;
        }
        Some(out)
    }

    /// Linear extension of τ^{-1} to vectors supported on Γ2.
    pub fn tau_inv_vec(&self, v: &[i64]) -> Option<Vec<i64>> {
        let inv = self.inverse_tau();
        let mut out = vec![0; v.len()];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            out[*inv.get(&i)?] += c;
        }
        Some(out)
    }

    pub fn tau_pairs_string(&self) -> String {
        self.tau.iter().map(|(a, b)| format!("{}:{}", a + 1, b + 1)).collect::<Vec<_>>().join(",")
    }
}

/// Validates (Γ1, Γ2, τ) and computes ord(τ).
pub fn validate_triple(
    rs: &RootSystem,
    gamma1: &[usize],
    gamma2: &[usize],
    tau: &[(usize, usize)],
) -> Result<BDTriple> {
    for &i in gamma1.iter().chain(gamma2).chain(tau.iter().flat_map(|(a, b)| [a, b])) {
        rs.simple_index_check(i)?;
    }
    let g1: BTreeSet<usize> = gamma1.iter().copied().collect();
    let g2: BTreeSet<usize> = gamma2.iter().copied().collect();
    let mut map = BTreeMap::new();
    for &(a, b) in tau {
        if map.insert(a, b).is_some_and(|old| old != b) {
            return Err(Error::NotBijective(format!("{} has two images", a + 1)));
        }
    }
    let dom: BTreeSet<usize> = map.keys().copied().collect();
    let img: BTreeSet<usize> = map.values().copied().collect();
    if dom != g1 {
        return Err(Error::NotBijective("domain of tau differs from gamma1".into()));
    }
    if img != g2 || img.len() != map.len() {
        return Err(Error::NotBijective("tau is not onto gamma2 or not injective".into()));
    }
    for (&a, &ta) in &map {
        for (&b, &tb) in &map {
            if rs.pair_int(&rs.simple_root(a), &rs.simple_root(b))
                != rs.pair_int(&rs.simple_root(ta), &rs.simple_root(tb))
            {
                return Err(Error::NotIsometry(a, b));
            }
        }
    }
    let mut ord = 0;
    for &g in &g1 {
        let mut path = vec![g];
        let mut cur = map[&g];
        let mut n = 1;
        while g1.contains(&cur) {
            if let Some(pos) = path.iter().position(|&x| x == cur) {
                return Err(Error::NotNilpotent(path[pos..].to_vec()));
            }
            path.push(cur);
            cur = map[&cur];
            n += 1;
        }
        ord = ord.max(n);
    }
    Ok(BDTriple { gamma1: g1, gamma2: g2, tau: map, ord_tau: ord })
}

/// Every valid triple on `rs`, in a deterministic order. Meant for small ranks.
pub fn enumerate_triples(rs: &RootSystem) -> Vec<BDTriple> {
    let r = rs.ss_rank;
    let mut out = Vec::new();
    for mask in 0u32..(1 << r) {
        let g1: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
        let mut images = Vec::new();
        injections(&g1, r, &mut Vec::new(), &mut images);
        for img in images {
            let tau: Vec<(usize, usize)> = g1.iter().copied().zip(img.iter().copied()).collect();
            if let Ok(t) = validate_triple(rs, &g1, &img, &tau) {
                out.push(t);
            }
        }
    }
    out
}

fn injections(dom: &[usize], r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == dom.len() {
        out.push(cur.clone());
        return;
    }
    for j in 0..r {
        if !cur.contains(&j) {
            cur.push(j);
            injections(dom, r, cur, out);
            cur.pop();
        }
    }
}

fn supported_in(v: &[i64], set: &BTreeSet<usize>) -> bool {
    v.iter().enumerate().all(|(i, &c)| c == 0 || set.contains(&i))
}

/// Pairs (α, β) of positive-root indices with α < β, i.e. β = τ^n(α), n ≥ 1.
pub fn partial_order_pairs(rs: &RootSystem, triple: &BDTriple) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (ai, a) in rs.positive_roots.iter().enumerate() {
        if a.iter().all(|&c| c == 0) || !supported_in(a, &triple.gamma1) {
            continue;
        }
        let mut cur = a.clone();
        while supported_in(&cur, &triple.gamma1) {
            cur = triple.tau_vec(&cur).expect("supported on gamma1");
            let id = rs.root_id(&cur).expect("tau maps roots of l1 to roots");
            assert!(!id.negative, "tau maps positive roots to positive roots");
            out.push((ai, id.index));
        }
    }
    out
}

/// r0 = Σ R_ij t_i ⊗ t_j, where t_i ∈ h corresponds to α_i under the form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanTerm {
    pub r0: QMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum R0Mode {
    Canonical,
    /// Explicit matrix, e.g. read from a file.
    FromMatrix(QMatrix),
    /// Target Cayley transform as a full matrix on h in t-coordinates.
    MatchTheta(QMatrix),
}

pub const R0_CONVENTION_NOTE: &str = "r0 convention: r0 + r0^21 = Omega_0 (Cartan block of the \
Casimir of the fixed form); the standard structure has r0 = Omega_0/2, i.e. (1/2) sum x_i (x) x_i \
over an orthonormal basis of h";

/// Residuals of the two defining constraints. Empty when r0 is admissible.
pub fn r0_violations(rs: &RootSystem, triple: &BDTriple, r0: &QMatrix) -> Vec<String> {
    let n = rs.cartan_rank;
    let mut out = Vec::new();
    if r0.rows() != n || r0.cols() != n {
        out.push(format!("r0 must be {n}x{n}"));
        return out;
    }
    let ginv = rs.gram.inverse().expect("nondegenerate form");
    if r0.add(&r0.transpose()) != ginv {
        out.push("r0 + r0^21 differs from Omega_0".into());
    }
    for (&a, &t) in &triple.tau {
        let av = e_vec(n, a);
        let tv = e_vec(n, t);
        let lhs = r0.transpose().mul(&rs.gram).mul_vec(&tv);
        let rhs = r0.mul(&rs.gram).mul_vec(&av);
        if lhs.iter().zip(&rhs).any(|(x, y)| !(x + y).is_zero()) {
            out.push(format!("(tau a{} (x) 1) r0 + (1 (x) a{}) r0 != 0", a + 1, a + 1));
        }
    }
    out
}

fn e_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = q(1);
    v
}

pub fn solve_r0(rs: &RootSystem, triple: &BDTriple, mode: &R0Mode) -> Result<CartanTerm> {
    let r0 = match mode {
        R0Mode::Canonical => canonical_r0(rs, triple)?,
        R0Mode::FromMatrix(m) => {
            let v = r0_violations(rs, triple, m);
            if !v.is_empty() {
                return Err(Error::InvalidR0(v.join("; ")));
            }
            m.clone()
        }
        R0Mode::MatchTheta(theta) => r0_from_theta(rs, triple, theta)?,
    };
    let v = r0_violations(rs, triple, &r0);
    if !v.is_empty() {
        return Err(Error::Internal(format!("solver produced invalid r0: {}", v.join("; "))));
    }
    Ok(CartanTerm { r0 })
}

/// R = G^{-1}/2 + S with S skew; the constraint for α becomes
/// S G (a - t) = -(a + t)/2. Free unknowns are set to zero.
fn canonical_r0(rs: &RootSystem, triple: &BDTriple) -> Result<QMatrix> {
    let n = rs.cartan_rank;
    let g = &rs.gram;
    let ginv = g.inverse().expect("nondegenerate form");
    let unknowns: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let col: BTreeMap<(usize, usize), usize> =
        unknowns.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (&a, &t) in &triple.tau {
        let mut d = vec![Q::zero(); n];
        d[a] += q(1);
        d[t] -= q(1);
        let u = g.mul_vec(&d);
        for k in 0..n {
            let mut row = vec![Q::zero(); unknowns.len()];
            for (j, uj) in u.iter().enumerate() {
                if uj.is_zero() || j == k {
                    continue;
                }
                if k < j {
                    row[col[&(k, j)]] += uj;
                } else {
                    row[col[&(j, k)]] -= uj;
                }
            }
            let mut b = Q::zero();
            if k == a {
                b -= qr(1, 2);
            }
            if k == t {
                b -= qr(1, 2);
            }
            rows.push(row);
            rhs.push(b);
        }
    }
    let mut s = QMatrix::zeros(n, n);
    if !rows.is_empty() && !unknowns.is_empty() {
        let m = QMatrix::from_rows(&rows);
        let x = m.solve(&rhs).ok_or_else(|| Error::Infeasible("r0 constraints are inconsistent".into()))?;
        for (k, &(i, j)) in unknowns.iter().enumerate() {
            s.set(i, j, x[k].clone());
            s.set(j, i, -x[k].clone());
        }
    } else if rhs.iter().any(|b| !b.is_zero()) {
        return Err(Error::Infeasible("r0 constraints are inconsistent".into()));
    }
    Ok(ginv.scale(&qr(1, 2)).add(&s))
}

/// From a target θ on h: f = θ(θ - 1)^{-1}, R = f G^{-1}.
fn r0_from_theta(rs: &RootSystem, triple: &BDTriple, theta: &QMatrix) -> Result<QMatrix> {
    let n = rs.cartan_rank;
    if theta.rows() != n || theta.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: theta.rows() });
    }
    for (&a, &t) in &triple.tau {
        if theta.mul_vec(&e_vec(n, a)) != e_vec(n, t) {
            return Err(Error::Infeasible(format!("target theta does not extend tau at a{}", a + 1)));
        }
    }
    if theta.transpose().mul(&rs.gram).mul(theta) != rs.gram {
        return Err(Error::TargetThetaNotIsometry);
    }
    let tm1 = theta.sub(&QMatrix::identity(n));
    let inv = tm1
        .inverse()
        .ok_or_else(|| Error::Infeasible("theta - 1 is singular on h".into()))?;
    let f = theta.mul(&inv);
    let r0 = f.mul(&rs.gram.inverse().expect("nondegenerate form"));
    let v = r0_violations(rs, triple, &r0);
    if !v.is_empty() {
        return Err(Error::Infeasible(v.join("; ")));
    }
    Ok(r0)
}

/// Cartan matrix of f = R G, in t-coordinates.
pub fn f_cartan(rs: &RootSystem, r0: &CartanTerm) -> QMatrix {
    r0.r0.mul(&rs.gram)
}

pub fn format_matrix(m: &QMatrix) -> Vec<String> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(fmt_q).collect::<Vec<_>>().join(" "))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractRMatrix {
    pub cartan: CartanTerm,
    /// Positive-root indices α, each contributing x_{-α} ⊗ x_α.
    pub diagonal_pairs: Vec<usize>,
    /// (α, β) with α < β, each contributing x_{-α} ∧ x_β.
    pub wedge_pairs: Vec<(usize, usize)>,
}

pub fn assemble_r(rs: &RootSystem, triple: &BDTriple, r0: &CartanTerm) -> AbstractRMatrix {
    AbstractRMatrix {
        cartan: r0.clone(),
        diagonal_pairs: (0..rs.num_positive_roots()).collect(),
        wedge_pairs: partial_order_pairs(rs, triple),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub ambient: BTreeSet<usize>,
    pub triple: BDTriple,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductionChain {
    /// Step 0 is the input triple on the full simple-root set.
    pub steps: Vec<ChainStep>,
}

impl InductionChain {
    /// Number of recursion steps taken (equals ord(τ)).
    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Γ1' = Γ1 ∩ Γ2, Γ2' = τ(Γ1'), ambient = Γ2, until Γ1 is empty.
pub fn induction_chain(rs: &RootSystem, triple: &BDTriple) -> Result<InductionChain> {
    let mut steps = vec![ChainStep { ambient: (0..rs.ss_rank).collect(), triple: triple.clone() }];
    loop {
        let last = &steps.last().unwrap().triple;
        if last.gamma1.is_empty() {
            break;
        }
        let g1: Vec<usize> = last.gamma1.intersection(&last.gamma2).copied().collect();
        let tau: Vec<(usize, usize)> = g1.iter().map(|a| (*a, last.tau[a])).collect();
        let g2: Vec<usize> = tau.iter().map(|p| p.1).collect();
        let next = validate_triple(rs, &g1, &g2, &tau)?;
        if next.ord_tau + 1 != last.ord_tau {
            return Err(Error::Internal(format!(
                "ord did not drop by one: {} -> {}",
                last.ord_tau, next.ord_tau
            )));
        }
        let ambient = last.gamma2.clone();
        steps.push(ChainStep { ambient, triple: next });
    }
    Ok(InductionChain { steps })
}

/// Cremmer-Gervais triple on A_n: τ(α_j) = α_{j+1}.
pub fn cremmer_gervais(rs: &RootSystem) -> Result<BDTriple> {
    let n = rs.type_a_rank().ok_or(Error::NotTypeA)?;
    let g1: Vec<usize> = (0..n.saturating_sub(1)).collect();
    let g2: Vec<usize> = (1..n).collect();
    let tau: Vec<(usize, usize)> = g1.iter().map(|&j| (j, j + 1)).collect();
    validate_triple(rs, &g1, &g2, &tau)
}

/// The Cremmer-Gervais Cayley transform on h of sl(n+1):
/// θ(α_j) = α_{j+1} for j < n and θ(α_n) = -(α_1 + ... + α_n).
pub fn cremmer_gervais_theta(n: usize) -> QMatrix {
    QMatrix::from_fn(n, n, |i, j| {
        if j + 1 < n {
            if i == j + 1 { q(1) } else { q(0) }
        } else {
            q(-1)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(l: &str) -> RootSystem {
        RootSystem::build(l).unwrap()
    }

    #[test]
    fn cg_triples_have_expected_order() {
        for n in 1..=5 {
            let r = rs(&format!("A{n}"));
            let t = cremmer_gervais(&r).unwrap();
            assert_eq!(t.ord_tau, n - 1);
        }
        let t = validate_triple(&rs("A2"), &[], &[], &[]).unwrap();
        assert_eq!(t.ord_tau, 0);
    }

    #[test]
    fn rejections() {
        let a2 = rs("A2");
        assert_eq!(validate_triple(&a2, &[0], &[0], &[(0, 0)]), Err(Error::NotNilpotent(vec![0])));
        let b2 = rs("B2");
        assert_eq!(validate_triple(&b2, &[0], &[1], &[(0, 1)]), Err(Error::NotIsometry(0, 0)));
        assert!(matches!(validate_triple(&a2, &[0], &[1], &[]), Err(Error::NotBijective(_))));
        assert!(matches!(validate_triple(&a2, &[0], &[5], &[(0, 5)]), Err(Error::IndexOutOfRange(5))));
        let a3 = rs("A3");
        assert!(matches!(
            validate_triple(&a3, &[0, 2], &[0, 2], &[(0, 2), (2, 0)]),
            Err(Error::NotNilpotent(_))
        ));
    }

    #[test]
    fn order_pairs_cg() {
        let a2 = rs("A2");
        let t = cremmer_gervais(&a2).unwrap();
        let p = partial_order_pairs(&a2, &t);
        assert_eq!(p.len(), 1);
        assert_eq!(a2.positive_roots[p[0].0], vec![1, 0]);
        assert_eq!(a2.positive_roots[p[0].1], vec![0, 1]);

        let a3 = rs("A3");
        let t = cremmer_gervais(&a3).unwrap();
        let mut got: Vec<(Vec<i64>, Vec<i64>)> = partial_order_pairs(&a3, &t)
            .into_iter()
            .map(|(a, b)| (a3.positive_roots[a].clone(), a3.positive_roots[b].clone()))
            .collect();
        got.sort();
        let mut want = vec![
            (vec![1, 0, 0], vec![0, 1, 0]),
            (vec![0, 1, 0], vec![0, 0, 1]),
            (vec![1, 0, 0], vec![0, 0, 1]),
            (vec![1, 1, 0], vec![0, 1, 1]),
        ];
        want.sort();
        assert_eq!(got, want);
        assert!(partial_order_pairs(&a3, &BDTriple::trivial()).is_empty());
    }

    #[test]
    fn canonical_r0_trivial_is_half_casimir() {
        let a2 = rs("A2");
        let r = solve_r0(&a2, &BDTriple::trivial(), &R0Mode::Canonical).unwrap();
        assert_eq!(r.r0, a2.gram.inverse().unwrap().scale(&qr(1, 2)));
    }

    #[test]
    fn match_theta_cg_a2() {
        let a2 = rs("A2");
        let t = cremmer_gervais(&a2).unwrap();
        let theta = cremmer_gervais_theta(2);
        let r = solve_r0(&a2, &t, &R0Mode::MatchTheta(theta.clone())).unwrap();
        // recover θ = f (f - 1)^{-1}
        let f = f_cartan(&a2, &r);
        let back = f.mul(&f.sub(&QMatrix::identity(2)).inverse().unwrap());
        assert_eq!(back, theta);
        // in A2 the skew part is one-dimensional, so canonical must agree
        let c = solve_r0(&a2, &t, &R0Mode::Canonical).unwrap();
        assert_eq!(c, r);
        let bad = QMatrix::from_i64(2, 2, &[0, 2, 1, 0]);
        assert!(matches!(
            solve_r0(&a2, &t, &R0Mode::MatchTheta(bad)),
            Err(Error::Infeasible(_)) | Err(Error::TargetThetaNotIsometry)
        ));
        let scaled = QMatrix::from_i64(2, 2, &[0, -2, 1, -2]);
        assert_eq!(solve_r0(&a2, &t, &R0Mode::MatchTheta(scaled)), Err(Error::TargetThetaNotIsometry));
    }

    #[test]
    fn from_matrix_is_checked() {
        let a1 = rs("A1");
        let ok = QMatrix::from_rows(&[vec![qr(1, 4)]]);
        assert!(solve_r0(&a1, &BDTriple::trivial(), &R0Mode::FromMatrix(ok)).is_ok());
        let doubled = QMatrix::from_rows(&[vec![qr(1, 2)]]);
        assert!(matches!(
            solve_r0(&a1, &BDTriple::trivial(), &R0Mode::FromMatrix(doubled)),
            Err(Error::InvalidR0(_))
        ));
    }

    #[test]
    fn assemble_counts() {
        let a1 = rs("A1");
        let r = assemble_r(&a1, &BDTriple::trivial(), &solve_r0(&a1, &BDTriple::trivial(), &R0Mode::Canonical).unwrap());
        assert_eq!((r.diagonal_pairs.len(), r.wedge_pairs.len()), (1, 0));
        for (n, d, w) in [(2, 3, 1), (3, 6, 4)] {
            let a = rs(&format!("A{n}"));
            let t = cremmer_gervais(&a).unwrap();
            let r = assemble_r(&a, &t, &solve_r0(&a, &t, &R0Mode::Canonical).unwrap());
            assert_eq!((r.diagonal_pairs.len(), r.wedge_pairs.len()), (d, w));
        }
    }

    #[test]
    fn chains() {
        let a3 = rs("A3");
        let t = cremmer_gervais(&a3).unwrap();
        let c = induction_chain(&a3, &t).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.steps[1].triple.gamma1, BTreeSet::from([1]));
        assert_eq!(c.steps[1].triple.gamma2, BTreeSet::from([2]));
        assert_eq!(c.steps[1].ambient, BTreeSet::from([1, 2]));
        assert!(c.steps[2].triple.gamma1.is_empty());
        assert_eq!(induction_chain(&a3, &BDTriple::trivial()).unwrap().len(), 0);
        let a2 = rs("A2");
        let c = induction_chain(&a2, &cremmer_gervais(&a2).unwrap()).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn triple_counts_small_rank() {
        // A1: trivial only. A2: trivial, α1→α2, α2→α1.
        assert_eq!(enumerate_triples(&rs("A1")).len(), 1);
        assert_eq!(enumerate_triples(&rs("A2")).len(), 3);
    }
}
