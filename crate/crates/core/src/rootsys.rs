//! Reduced root systems of types A-G, products, and central torus extensions.
//!
//! Roots live in simple-root coordinates. Torus coordinates follow the
//! semisimple ones; roots have zero torus part. The same coordinates are
//! used for h through the form identification h ~ h*.

use crate::error::{Error, Result};
use crate::linalg::{q, qr, QMatrix, Q};
use num::{One, Zero};
use std::collections::{BTreeSet, HashSet, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Component {
    pub letter: char,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub components: Vec<Component>,
    pub torus_rank: usize,
    /// Semisimple rank; simple roots are the first `ss_rank` unit vectors.
    pub ss_rank: usize,
    pub positive_roots: Vec<Vec<i64>>,
    /// Invariant form on h* in these coordinates.
    pub gram: QMatrix,
    pub cartan_rank: usize,
    root_index: std::collections::HashMap<Vec<i64>, usize>,
    /// Integer Cartan numbers <α_j, α_i^∨>, row j, column i.
    cartan: Vec<Vec<i64>>,
}

/// Integer vector with a sign: index into `positive_roots` and whether negated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootId {
    pub index: usize,
    pub negative: bool,
}

/// Parses labels like `A3`, `A2xA1`, `B2+T1`.
pub fn parse_label(label: &str) -> Result<(Vec<Component>, usize)> {
    let bad = || Error::UnrecognizedLabel(label.to_string());
    let s: String = label.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad());
    }
    let (ss, torus) = match s.split_once('+') {
        Some((a, t)) => {
            let t = t.strip_prefix('T').ok_or_else(bad)?;
            (a.to_string(), t.parse::<usize>().map_err(|_| bad())?)
        }
        None => (s.clone(), 0),
    };
    let mut comps = Vec::new();
    if let Some(t) = ss.strip_prefix('T') {
        // pure torus
        if ss.contains('x') {
            return Err(bad());
        }
        let t: usize = t.parse().map_err(|_| bad())?;
        return Ok((comps, t + torus));
    }
    for part in ss.split('x') {
        let mut chars = part.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        if !"ABCDEFG".contains(letter) {
            return Err(bad());
        }
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        if rank == 0 {
            return Err(Error::RankMismatch { letter, rank });
        }
        match letter {
            'E' if !(6..=8).contains(&rank) => return Err(Error::RankMismatch { letter, rank }),
            'F' if rank != 4 => return Err(Error::RankMismatch { letter, rank }),
            'G' if rank != 2 => return Err(Error::RankMismatch { letter, rank }),
            'D' if rank < 2 => return Err(Error::RankMismatch { letter, rank }),
            _ => {}
        }
        comps.push(Component { letter, rank });
    }
    Ok((comps, torus))
}

/// Squared lengths and Dynkin edges (Bourbaki numbering, zero-based) of one
/// simple component, with long roots of squared length 2. Adjacent simple
/// roots pair to minus half the larger squared length.
fn component_data(c: Component) -> (Vec<Q>, Vec<(usize, usize)>) {
    let n = c.rank;
    let path = |k: usize| (0..k.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
    match c.letter {
        'A' => (vec![q(2); n], path(n)),
        'B' => {
            let mut l = vec![q(2); n];
            if n > 1 {
                l[n - 1] = q(1);
            }
            (l, path(n))
        }
        'C' => {
            let mut l = vec![q(1); n];
            l[n - 1] = q(2);
            (l, path(n))
        }
        'D' => (vec![q(2); n], d_edges(n)),
        'E' => {
            let mut e = vec![(0, 2), (1, 3), (2, 3)];
            for i in 3..n - 1 {
                e.push((i, i + 1));
            }
            (vec![q(2); n], e)
        }
        'F' => (vec![q(2), q(2), q(1), q(1)], path(4)),
        'G' => (vec![qr(2, 3), q(2)], path(2)),
        _ => unreachable!("letter validated by parser"),
    }
}

/// D_n: a path on the first n-1 nodes plus the fork edge to the last node.
fn d_edges(n: usize) -> Vec<(usize, usize)> {
    if n < 3 {
        return vec![];
    }
    let mut e: Vec<(usize, usize)> = (0..n - 2).map(|i| (i, i + 1)).collect();
    e.retain(|&(_, b)| b <= n - 2);
    e.push((n - 3, n - 1));
    e
}

impl RootSystem {
    pub fn build(label: &str) -> Result<RootSystem> {
        let (components, torus_rank) = parse_label(label)?;
        Self::from_components(components, torus_rank, None)
    }

    /// Same as [`build`](Self::build) but with an explicit symmetric,
    /// nondegenerate form on the torus block.
    pub fn build_with_torus_gram(label: &str, torus_gram: QMatrix) -> Result<RootSystem> {
        let (components, torus_rank) = parse_label(label)?;
        Self::from_components(components, torus_rank, Some(torus_gram))
    }

    pub fn from_components(
        components: Vec<Component>,
        torus_rank: usize,
        torus_gram: Option<QMatrix>,
    ) -> Result<RootSystem> {
        let ss_rank: usize = components.iter().map(|c| c.rank).sum();
        let cartan_rank = ss_rank + torus_rank;
        let mut gram = QMatrix::zeros(cartan_rank, cartan_rank);
        let mut offset = 0;
        for &c in &components {
            let (lengths, edges) = component_data(c);
            for (i, l) in lengths.into_iter().enumerate() {
                gram.set(offset + i, offset + i, l);
            }
            for (a, b) in edges {
                let la = gram.get(offset + a, offset + a).clone();
                let lb = gram.get(offset + b, offset + b).clone();
                let p = -(if la > lb { la } else { lb }) / q(2);
                gram.set(offset + a, offset + b, p.clone());
                gram.set(offset + b, offset + a, p);
            }
            offset += c.rank;
        }
        match torus_gram {
            Some(tg) => {
                if tg.rows() != torus_rank || tg.cols() != torus_rank {
                    return Err(Error::DimensionMismatch { expected: torus_rank, got: tg.rows() });
                }
                if tg != tg.transpose() || tg.det().is_zero() {
                    return Err(Error::Parse("torus gram must be symmetric and nondegenerate".into()));
                }
                for i in 0..torus_rank {
                    for j in 0..torus_rank {
                        gram.set(ss_rank + i, ss_rank + j, tg.get(i, j).clone());
                    }
                }
            }
            None => {
                for i in 0..torus_rank {
                    gram.set(ss_rank + i, ss_rank + i, Q::one());
                }
            }
        }
        let positive_roots = generate_positive_roots(&gram, ss_rank, cartan_rank);
        let root_index = positive_roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        let cartan = (0..ss_rank)
            .map(|j| {
                let mut e = vec![0i64; cartan_rank];
                e[j] = 1;
                (0..ss_rank).map(|i| cartan_integer(&gram, &e, i)).collect()
            })
            .collect();
        Ok(RootSystem {
            components,
            torus_rank,
            ss_rank,
            positive_roots,
            gram,
            cartan_rank,
            root_index,
            cartan,
        })
    }

    pub fn label(&self) -> String {
        let s: Vec<String> =
            self.components.iter().map(|c| format!("{}{}", c.letter, c.rank)).collect();
        if s.is_empty() {
            return format!("T{}", self.torus_rank);
        }
        let mut out = s.join("x");
        if self.torus_rank > 0 {
            out.push_str(&format!("+T{}", self.torus_rank));
        }
        out
    }

    /// True for a single A_n component without torus.
    pub fn type_a_rank(&self) -> Option<usize> {
        match self.components.as_slice() {
            [Component { letter: 'A', rank }] if self.torus_rank == 0 => Some(*rank),
            _ => None,
        }
    }

    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.cartan_rank];
        v[i] = 1;
        v
    }

    pub fn simple_roots(&self) -> Vec<Vec<i64>> {
        (0..self.ss_rank).map(|i| self.simple_root(i)).collect()
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// dim g = dim h + 2 |Δ+|.
    pub fn dim_g(&self) -> usize {
        self.cartan_rank + 2 * self.positive_roots.len()
    }

    pub fn form_pairing(&self, x: &[Q], y: &[Q]) -> Result<Q> {
        if x.len() != self.cartan_rank {
            return Err(Error::DimensionMismatch { expected: self.cartan_rank, got: x.len() });
        }
        if y.len() != self.cartan_rank {
            return Err(Error::DimensionMismatch { expected: self.cartan_rank, got: y.len() });
        }
        Ok(crate::linalg::dot(x, &self.gram.mul_vec(y)))
    }

    pub fn pair_int(&self, x: &[i64], y: &[i64]) -> Q {
        let mut s = Q::zero();
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b != 0 {
                    s += self.gram.get(i, j) * q(a * b);
                }
            }
        }
        s
    }

    /// Looks up a root (positive or negative).
    pub fn root_id(&self, v: &[i64]) -> Option<RootId> {
        if let Some(&i) = self.root_index.get(v) {
            return Some(RootId { index: i, negative: false });
        }
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        self.root_index.get(&neg).map(|&i| RootId { index: i, negative: true })
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.root_id(v).is_some()
    }

    pub fn root_vector(&self, id: RootId) -> Vec<i64> {
        let r = &self.positive_roots[id.index];
        if id.negative {
            r.iter().map(|x| -x).collect()
        } else {
            r.clone()
        }
    }

    /// All roots: positives first, then their negatives.
    pub fn all_roots(&self) -> Vec<Vec<i64>> {
        let mut v = self.positive_roots.clone();
        v.extend(self.positive_roots.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        v
    }

    /// Support of a root: indices of simple roots with nonzero coefficient.
    pub fn support(v: &[i64]) -> BTreeSet<usize> {
        v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect()
    }

    /// Positive roots supported inside the given simple-root subset.
    pub fn subsystem_positive(&self, simple: &BTreeSet<usize>) -> Vec<Vec<i64>> {
        self.positive_roots
            .iter()
            .filter(|r| Self::support(r).is_subset(simple))
            .cloned()
            .collect()
    }

    /// Reflection of `v` in simple root `i`.
    pub fn reflect(&self, i: usize, v: &[i64]) -> Vec<i64> {
        let c: i64 = (0..self.ss_rank).map(|j| v[j] * self.cartan[j][i]).sum();
        let mut out = v.to_vec();
        out[i] -= c;
        out
    }

    /// Coroot of simple root i in h-coordinates: 2 t_i / (α_i, α_i).
    pub fn simple_coroot(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.cartan_rank];
        v[i] = q(2) / self.gram.get(i, i);
        v
    }

    pub fn simple_index_check(&self, i: usize) -> Result<()> {
        if i < self.ss_rank {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(i))
        }
    }
}

/// <v, α_i^∨> = 2 (v, α_i) / (α_i, α_i), integral on the root lattice.
fn cartan_integer(gram: &QMatrix, v: &[i64], i: usize) -> i64 {
    let mut s = Q::zero();
    for (j, &x) in v.iter().enumerate() {
        if x != 0 {
            s += gram.get(j, i) * q(x);
        }
    }
    let c = s * q(2) / gram.get(i, i);
    assert!(c.is_integer(), "non-integral Cartan integer");
    c.to_integer().try_into().expect("Cartan integer overflow")
}

fn generate_positive_roots(gram: &QMatrix, ss_rank: usize, cartan_rank: usize) -> Vec<Vec<i64>> {
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    for i in 0..ss_rank {
        let mut v = vec![0i64; cartan_rank];
        v[i] = 1;
        seen.insert(v.clone());
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        for i in 0..ss_rank {
            let c = cartan_integer(gram, &v, i);
            let mut w = v.clone();
            w[i] -= c;
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    let mut pos: Vec<Vec<i64>> =
        seen.into_iter().filter(|v| v.iter().all(|&x| x >= 0)).collect();
    pos.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    pos
}

/// Lattice in h given by generating columns (rational coordinates allowed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub basis: QMatrix,
}

impl Lattice {
    pub fn new(basis: QMatrix) -> Result<Lattice> {
        if basis.rank() != basis.cols() {
            return Err(Error::Parse("lattice basis columns are dependent".into()));
        }
        Ok(Lattice { basis })
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }
}

/// Kernel of exp on h (2πi dropped): the simple coroot lattice. With a
/// central torus the caller must pass an explicit kernel.
pub fn exp_kernel_lattice(rs: &RootSystem, user: Option<&Lattice>) -> Result<Lattice> {
    if let Some(l) = user {
        if l.basis.rows() != rs.cartan_rank {
            return Err(Error::DimensionMismatch { expected: rs.cartan_rank, got: l.basis.rows() });
        }
        return Ok(l.clone());
    }
    if rs.torus_rank > 0 {
        return Err(Error::KernelDataRequired);
    }
    let cols: Vec<Vec<Q>> = (0..rs.ss_rank).map(|i| rs.simple_coroot(i)).collect();
    Lattice::new(QMatrix::from_columns(rs.cartan_rank, &cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_root_counts() {
        let expect = [
            ("A1", 1),
            ("A2", 3),
            ("A3", 6),
            ("B2", 4),
            ("B3", 9),
            ("C3", 9),
            ("D4", 12),
            ("G2", 6),
            ("F4", 24),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
            ("A2xA1", 4),
            ("A2+T1", 3),
        ];
        for (label, n) in expect {
            let rs = RootSystem::build(label).unwrap();
            assert_eq!(rs.num_positive_roots(), n, "{label}");
        }
    }

    #[test]
    fn pairing_examples() {
        let a2 = RootSystem::build("A2").unwrap();
        let a1 = crate::linalg::int_vec(&a2.simple_root(0));
        let a2v = crate::linalg::int_vec(&a2.simple_root(1));
        assert_eq!(a2.form_pairing(&a1, &a1).unwrap(), q(2));
        assert_eq!(a2.form_pairing(&a1, &a2v).unwrap(), q(-1));
        let p = RootSystem::build("A1xA1").unwrap();
        let x = crate::linalg::int_vec(&p.simple_root(0));
        let y = crate::linalg::int_vec(&p.simple_root(1));
        assert_eq!(p.form_pairing(&x, &y).unwrap(), q(0));
        assert!(p.form_pairing(&x, &[q(1)]).is_err());
    }

    #[test]
    fn labels() {
        assert!(RootSystem::build("E5").is_err());
        assert!(RootSystem::build("Z3").is_err());
        assert!(RootSystem::build("G3").is_err());
        let rs = RootSystem::build("A2xA1+T1").unwrap();
        assert_eq!(rs.cartan_rank, 4);
        assert_eq!(rs.label(), "A2xA1+T1");
        assert_eq!(rs.gram.get(3, 3), &q(1));
    }

    #[test]
    fn d_and_e_dynkin_shapes() {
        let d4 = RootSystem::build("D4").unwrap();
        // central node 1 meets 0, 2, 3
        assert_eq!(d4.gram.get(1, 0), &q(-1));
        assert_eq!(d4.gram.get(1, 2), &q(-1));
        assert_eq!(d4.gram.get(1, 3), &q(-1));
        assert_eq!(d4.gram.get(2, 3), &q(0));
        let e6 = RootSystem::build("E6").unwrap();
        assert_eq!(e6.gram.get(1, 3), &q(-1));
        assert_eq!(e6.gram.get(0, 2), &q(-1));
        assert!(e6.gram.det() > q(0));
    }

    #[test]
    fn coroot_lattice_an() {
        let rs = RootSystem::build("A3").unwrap();
        let l = exp_kernel_lattice(&rs, None).unwrap();
        assert_eq!(l.basis, QMatrix::identity(3));
        let t = RootSystem::build("A1+T1").unwrap();
        assert_eq!(exp_kernel_lattice(&t, None), Err(Error::KernelDataRequired));
        let user = Lattice::new(QMatrix::identity(2)).unwrap();
        assert_eq!(exp_kernel_lattice(&t, Some(&user)).unwrap(), user);
    }
}
