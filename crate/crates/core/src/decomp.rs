//! Subalgebra data attached to a triple and r0: Levi pieces, h1, h2,
//! h^ort, the complements a_i, f on h, and the Cayley transform θ.
//!
//! With f = R G in t-coordinates, g+ ∩ h = Im(1 - f) and g- ∩ h = Im f.
//! Then h^ort_1 = ker f and h^ort_2 = ker(1 - f).

use crate::bdtriple::{f_cartan, BDTriple, CartanTerm};
use crate::error::{Error, Result};
use crate::linalg::{q, vec_sub, QMatrix, Subspace, Q};
use crate::rootsys::RootSystem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub cartan_rank: usize,
    /// Positive-root indices of l1 and l2.
    pub levi1_roots: Vec<usize>,
    pub levi2_roots: Vec<usize>,
    /// Positive roots outside l1 (n+) and outside l2 (n- uses their negatives).
    pub n_plus_roots: Vec<usize>,
    pub n_minus_roots: Vec<usize>,
    /// l'_i ∩ h, spanned by t_α for α ∈ Γ_i.
    pub lprime1_h: Subspace,
    pub lprime2_h: Subspace,
    pub z1: Subspace,
    pub z2: Subspace,
    pub h1: Subspace,
    pub h2: Subspace,
    pub h_ort1: Subspace,
    pub h_ort2: Subspace,
    pub a1: Subspace,
    pub a2: Subspace,
    pub f_cartan: QMatrix,
    /// Basis of (l'_1 ∩ h) ⊕ a_1: first the t_α (α ∈ Γ1), then a basis of a1.
    pub theta_domain: Vec<Vec<Q>>,
    /// θ applied to `theta_domain`, in the same order.
    pub theta_images: Vec<Vec<Q>>,
    /// f (f - 1)^{-1} on all of h, when 1 - f is invertible.
    pub theta_full: Option<QMatrix>,
    pub dim_g: usize,
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![q(0); n];
    v[i] = q(1);
    v
}

fn roots_on(rs: &RootSystem, set: &std::collections::BTreeSet<usize>) -> Vec<usize> {
    rs.positive_roots
        .iter()
        .enumerate()
        .filter(|(_, r)| r.iter().enumerate().all(|(i, &c)| c == 0 || set.contains(&i)))
        .map(|(k, _)| k)
        .collect()
}

pub fn compute_decomposition(rs: &RootSystem, triple: &BDTriple, r0: &CartanTerm) -> Result<Decomposition> {
    let n = rs.cartan_rank;
    let g = &rs.gram;
    let levi1_roots = roots_on(rs, &triple.gamma1);
    let levi2_roots = roots_on(rs, &triple.gamma2);
    let all: Vec<usize> = (0..rs.num_positive_roots()).collect();
    let n_plus_roots: Vec<usize> = all.iter().copied().filter(|k| !levi1_roots.contains(k)).collect();
    let n_minus_roots: Vec<usize> = all.iter().copied().filter(|k| !levi2_roots.contains(k)).collect();

    let span_units = |set: &std::collections::BTreeSet<usize>| {
        Subspace::span(n, &set.iter().map(|&i| unit(n, i)).collect::<Vec<_>>())
    };
    let lprime1_h = span_units(&triple.gamma1);
    let lprime2_h = span_units(&triple.gamma2);
    let z1 = lprime1_h.orth_complement(g);
    let z2 = lprime2_h.orth_complement(g);

    let f = f_cartan(rs, r0);
    let one_minus_f = QMatrix::identity(n).sub(&f);
    let gplus_h = Subspace::column_space(&one_minus_f);
    let gminus_h = Subspace::column_space(&f);
    let h1 = gplus_h.intersect(&z1);
    let h2 = gminus_h.intersect(&z2);
    let h_ort1 = Subspace::column_space(&f.nullspace());
    let h_ort2 = Subspace::column_space(&one_minus_f.nullspace());

    let mut problems = Vec::new();
    if h_ort1 != gplus_h.orth_complement(g) || h_ort2 != gminus_h.orth_complement(g) {
        problems.push("h^ort differs from the orthogonal complement of g± ∩ h".to_string());
    }
    if !h1.contains_space(&h_ort1) || !h2.contains_space(&h_ort2) {
        problems.push("h^ort_i is not contained in h_i".to_string());
    }
    if gplus_h != lprime1_h.sum(&h1) || gminus_h != lprime2_h.sum(&h2) {
        problems.push("g± ∩ h is not (l'_i ∩ h) + h_i".to_string());
    }
    if !problems.is_empty() {
        return Err(Error::Internal(problems.join("; ")));
    }

    let a1 = h_ort1.complement_in(&h1);
    let mut theta_domain = Vec::new();
    let mut theta_images = Vec::new();
    for (&a, &t) in &triple.tau {
        let y = unit(n, a);
        let x = one_minus_f.solve(&y).expect("t_α lies in g+ ∩ h");
        let cayley = f.mul_vec(&x).iter().map(|c| -c).collect::<Vec<_>>();
        if !h_ort2.contains(&vec_sub(&cayley, &unit(n, t))) {
            return Err(Error::Internal(format!("Cayley transform does not extend tau at a{}", a + 1)));
        }
        theta_domain.push(y);
        theta_images.push(unit(n, t));
    }
    let mut a2_vecs = Vec::new();
    for y in a1.vectors() {
        let x = one_minus_f.solve(&y).expect("a1 lies in g+ ∩ h");
        let img: Vec<Q> = f.mul_vec(&x).iter().map(|c| -c).collect();
        if !h2.contains(&img) {
            return Err(Error::DegenerateComplement("θ(a1) leaves h2".into()));
        }
        theta_domain.push(y);
        theta_images.push(img.clone());
        a2_vecs.push(img);
    }
    let a2 = Subspace::span(n, &a2_vecs);
    if a2.dim() != a1.dim() || !a2.is_direct_with(&h_ort2) || a2.sum(&h_ort2) != h2 {
        return Err(Error::DegenerateComplement("θ(a1) is not a complement of h^ort_2 in h_2".into()));
    }

    let theta_full = one_minus_f.inverse().map(|inv| f.mul(&inv).neg());
    if let Some(th) = &theta_full {
        for (x, y) in theta_domain.iter().zip(&theta_images) {
            if &th.mul_vec(x) != y {
                return Err(Error::Internal("θ on h disagrees with its restriction".into()));
            }
        }
    }

    let d = Decomposition {
        cartan_rank: n,
        levi1_roots,
        levi2_roots,
        n_plus_roots,
        n_minus_roots,
        lprime1_h,
        lprime2_h,
        z1,
        z2,
        h1,
        h2,
        h_ort1,
        h_ort2,
        a1,
        a2,
        f_cartan: f,
        theta_domain,
        theta_images,
        theta_full,
        dim_g: rs.dim_g(),
    };
    let v = d.invariant_violations(rs, triple);
    if !v.is_empty() {
        return Err(Error::Internal(v.join("; ")));
    }
    Ok(d)
}

impl Decomposition {
    /// dim (l'_1 ⊕ a_1) = 2 |Δ+(l1)| + |Γ1| + dim a1.
    pub fn dim_lprime_a1(&self) -> usize {
        2 * self.levi1_roots.len() + self.lprime1_h.dim() + self.a1.dim()
    }

    pub fn dim_lprime_a2(&self) -> usize {
        2 * self.levi2_roots.len() + self.lprime2_h.dim() + self.a2.dim()
    }

    pub fn dim_l1(&self) -> usize {
        2 * self.levi1_roots.len() + self.cartan_rank
    }

    pub fn dim_gplus(&self) -> usize {
        self.dim_lprime_a1() + self.h_ort1.dim() + self.n_plus_roots.len()
    }

    pub fn dim_gminus(&self) -> usize {
        self.dim_lprime_a2() + self.h_ort2.dim() + self.n_minus_roots.len()
    }

    pub fn dim_mplus(&self) -> usize {
        self.h_ort1.dim() + self.n_plus_roots.len()
    }

    pub fn dim_mminus(&self) -> usize {
        self.h_ort2.dim() + self.n_minus_roots.len()
    }

    /// D1 = (l'_1 ∩ h) ⊕ a_1 as a subspace of h.
    pub fn theta_domain_space(&self) -> Subspace {
        Subspace::span(self.cartan_rank, &self.theta_domain)
    }

    pub fn theta_image_space(&self) -> Subspace {
        Subspace::span(self.cartan_rank, &self.theta_images)
    }

    /// θ on an element of D1 (by coordinates in the domain basis).
    pub fn theta_apply(&self, x: &[Q]) -> Option<Vec<Q>> {
        let dom = QMatrix::from_columns(self.cartan_rank, &self.theta_domain);
        let c = if self.theta_domain.is_empty() {
            if x.iter().all(|v| v == &q(0)) { vec![] } else { return None }
        } else {
            dom.solve(x)?
        };
        let img = QMatrix::from_columns(self.cartan_rank, &self.theta_images);
        if c.is_empty() {
            return Some(vec![q(0); self.cartan_rank]);
        }
        Some(img.mul_vec(&c))
    }

    /// θ^{-1} on an element of θ(D1).
    pub fn theta_inv_apply(&self, y: &[Q]) -> Option<Vec<Q>> {
        if self.theta_images.is_empty() {
            return if y.iter().all(|v| v == &q(0)) { Some(vec![q(0); self.cartan_rank]) } else { None };
        }
        let img = QMatrix::from_columns(self.cartan_rank, &self.theta_images);
        let c = img.solve(y)?;
        Some(QMatrix::from_columns(self.cartan_rank, &self.theta_domain).mul_vec(&c))
    }

    /// θ as a matrix D1 → h in domain-basis coordinates, for reporting.
    pub fn theta_cartan(&self) -> QMatrix {
        QMatrix::from_columns(self.cartan_rank, &self.theta_images)
    }

    /// Image of a root of l1 under θ, i.e. the linear extension of τ.
    pub fn theta_root(&self, triple: &BDTriple, v: &[i64]) -> Option<Vec<i64>> {
        triple.tau_vec(v)
    }

    pub fn invariant_violations(&self, rs: &RootSystem, triple: &BDTriple) -> Vec<String> {
        let mut out = Vec::new();
        let g = &rs.gram;
        if self.dim_gplus() + self.dim_mplus() != self.dim_g {
            out.push(format!("dim g+ + dim m+ = {} != dim g", self.dim_gplus() + self.dim_mplus()));
        }
        if self.dim_gminus() + self.dim_mminus() != self.dim_g {
            out.push("dim g- + dim m- != dim g".into());
        }
        if !self.h1.contains_space(&self.h_ort1) || !self.h2.contains_space(&self.h_ort2) {
            out.push("h^ort_i not inside h_i".into());
        }
        // θ isometry on the domain basis
        for (i, x) in self.theta_domain.iter().enumerate() {
            for (j, y) in self.theta_domain.iter().enumerate() {
                let lhs = crate::linalg::dot(x, &g.mul_vec(y));
                let rhs = crate::linalg::dot(&self.theta_images[i], &g.mul_vec(&self.theta_images[j]));
                if lhs != rhs {
                    out.push(format!("θ is not an isometry on domain vectors {i}, {j}"));
                }
            }
        }
        // θ extends τ on roots of l1
        for &k in &self.levi1_roots {
            let r = &rs.positive_roots[k];
            match self.theta_root(triple, r) {
                Some(img) if rs.root_id(&img).is_some_and(|id| self.levi2_roots.contains(&id.index) && !id.negative) => {}
                _ => out.push(format!("θ does not map root {k} of l1 to a root of l2")),
            }
        }
        // g+ and m+ orthogonal on the Cartan part: h^ort_1 ⊥ (g+ ∩ h)
        let gplus_h = self.lprime1_h.sum(&self.h1);
        for x in self.h_ort1.vectors() {
            for y in gplus_h.vectors() {
                if crate::linalg::dot(&x, &g.mul_vec(&y)) != q(0) {
                    out.push("m+ is not orthogonal to g+ on h".into());
                }
            }
        }
        // D(g+) = g ⊕ g+/m+
        let dd = self.dim_g + self.dim_gplus() - self.dim_mplus();
        if dd != self.dim_g + self.dim_lprime_a1() {
            out.push("double dimension bookkeeping fails".into());
        }
        out
    }
}

/// True iff h^ort_1 = h^ort_2 = 0.
pub fn full_h_predicate(d: &Decomposition) -> bool {
    d.h_ort1.dim() == 0 && d.h_ort2.dim() == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdtriple::{cremmer_gervais, cremmer_gervais_theta, solve_r0, validate_triple, R0Mode};
    use crate::linalg::qr;

    fn setup(label: &str, cg: bool) -> (RootSystem, BDTriple, Decomposition) {
        let rs = RootSystem::build(label).unwrap();
        let t = if cg { cremmer_gervais(&rs).unwrap() } else { BDTriple::trivial() };
        let r0 = solve_r0(&rs, &t, &R0Mode::Canonical).unwrap();
        let d = compute_decomposition(&rs, &t, &r0).unwrap();
        (rs, t, d)
    }

    #[test]
    fn standard_theta_is_minus_identity() {
        for n in 1..=4 {
            let (_, _, d) = setup(&format!("A{n}"), false);
            assert!(full_h_predicate(&d));
            assert_eq!(d.a1.dim(), n);
            assert_eq!(d.theta_full, Some(QMatrix::identity(n).neg()));
            assert_eq!(d.n_plus_roots.len(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn cg_is_full_h_with_parabolic_content() {
        for n in 2..=4 {
            let (_, _, d) = setup(&format!("A{n}"), true);
            assert!(full_h_predicate(&d));
            assert_eq!(d.theta_full, Some(cremmer_gervais_theta(n)));
            // l1 ≅ gl(n): n(n-1)/2 positive roots, n+ = the last column
            assert_eq!(d.levi1_roots.len(), n * (n - 1) / 2);
            assert_eq!(d.n_plus_roots.len(), n);
            assert_eq!(d.dim_l1(), n * n);
        }
    }

    #[test]
    fn a2_single_root_bookkeeping() {
        let (_, _, d) = setup("A2", true);
        assert_eq!(d.dim_gplus() + d.dim_mplus(), 8);
        assert_eq!(d.h_ort1.dim(), 0);
    }

    #[test]
    fn hyperbolic_torus_gives_nonzero_h_ort() {
        let tg = QMatrix::from_i64(2, 2, &[0, 1, 1, 0]);
        let rs = RootSystem::build_with_torus_gram("A1+T2", tg).unwrap();
        let t = validate_triple(&rs, &[], &[], &[]).unwrap();
        let mut r = QMatrix::zeros(3, 3);
        r.set(0, 0, qr(1, 4));
        r.set(1, 2, q(1));
        let r0 = solve_r0(&rs, &t, &R0Mode::FromMatrix(r)).unwrap();
        let d = compute_decomposition(&rs, &t, &r0).unwrap();
        assert!(!full_h_predicate(&d));
        assert_eq!(d.h_ort1.dim(), 1);
        assert_eq!(d.h_ort2.dim(), 1);
        assert_eq!(d.a1.dim(), 1);
        assert!(d.theta_full.is_none());
    }
}
