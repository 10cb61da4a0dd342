//! Root systems and Chevalley bases for the simple Lie algebras of types
//! A, B, C, D and G2, with exact rational structure constants and the
//! invariant bilinear form normalized so short roots have squared length 2.

use crate::exactlin::{rat, ratio, Matrix, Rational, Subspace};
use num_traits::Zero;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// A root written in simple-root coordinates.
pub type Root = Vec<i64>;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("unsupported type label `{0}` (expected A1.., B2.., C2.., D4.., G2)")]
    BadTypeLabel(String),
}

/// Simple series supported by the desk-scale verification targets.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Series {
    A,
    B,
    C,
    D,
    G,
}

/// Finite root system given by a Cartan matrix, with the positive roots
/// enumerated by closure under simple reflections.
#[derive(Clone)]
pub struct RootSystem {
    pub label: String,
    pub series: Series,
    pub rank: usize,
    /// cartan[i][j] = ⟨α_i, α_j^∨⟩.
    pub cartan: Vec<Vec<i64>>,
    /// Half squared lengths (α_i, α_i)/2; short roots have d = 1.
    pub d: Vec<i64>,
    /// Positive roots ordered by height, then lexicographically.
    pub positive_roots: Vec<Root>,
    /// Simple reflections acting on h* in simple-root coordinates.
    pub simple_reflection_matrices: Vec<Matrix>,
    index: HashMap<Root, usize>,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({}, {} positive roots)", self.label, self.positive_roots.len())
    }
}

fn parse_label(label: &str) -> Result<(Series, usize), LieError> {
    let label = label.trim();
    let bad = || LieError::BadTypeLabel(label.to_string());
    let mut chars = label.chars();
    let series = match chars.next() {
        Some('A') => Series::A,
        Some('B') => Series::B,
        Some('C') => Series::C,
        Some('D') => Series::D,
        Some('G') => Series::G,
        _ => return Err(bad()),
    };
    let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
    let ok = match series {
        Series::A => rank >= 1,
        Series::B | Series::C => rank >= 2,
        Series::D => rank >= 4,
        Series::G => rank == 2,
    };
    if ok {
        Ok((series, rank))
    } else {
        Err(bad())
    }
}

fn cartan_matrix(series: Series, r: usize) -> (Vec<Vec<i64>>, Vec<i64>) {
    let mut a = vec![vec![0i64; r]; r];
    for i in 0..r {
        a[i][i] = 2;
    }
    let chain = |a: &mut Vec<Vec<i64>>, upto: usize| {
        for i in 0..upto {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    };
    let d;
    match series {
        Series::A => {
            chain(&mut a, r - 1);
            d = vec![1; r];
        }
        Series::B => {
            // α_r short: the double bond points from the long chain to α_r.
            chain(&mut a, r - 1);
            a[r - 2][r - 1] = -2;
            a[r - 1][r - 2] = -1;
            let mut dd = vec![2; r];
            dd[r - 1] = 1;
            d = dd;
        }
        Series::C => {
            // α_r long.
            chain(&mut a, r - 1);
            a[r - 2][r - 1] = -1;
            a[r - 1][r - 2] = -2;
            let mut dd = vec![1; r];
            dd[r - 1] = 2;
            d = dd;
        }
        Series::D => {
            chain(&mut a, r - 2);
            a[r - 3][r - 1] = -1;
            a[r - 1][r - 3] = -1;
            d = vec![1; r];
        }
        Series::G => {
            a[0][1] = -1;
            a[1][0] = -3;
            d = vec![1, 3];
        }
    }
    (a, d)
}

impl RootSystem {
    /// Builds the root system for a label such as "A2", "B2", "C3", "D4", "G2".
    pub fn build(label: &str) -> Result<RootSystem, LieError> {
        let (series, rank) = parse_label(label)?;
        let (cartan, d) = cartan_matrix(series, rank);

        // Closure of the simple roots under simple reflections, keeping positives.
        let mut pos: Vec<Root> = Vec::new();
        let mut seen: HashMap<Root, ()> = HashMap::new();
        for i in 0..rank {
            let mut root = vec![0i64; rank];
            root[i] = 1;
            seen.insert(root.clone(), ());
            pos.push(root);
        }
        loop {
            let mut new_roots = Vec::new();
            for root in &pos {
                for j in 0..rank {
                    // s_j(α) = α − ⟨α, α_j^∨⟩ α_j
                    let pairing: i64 = (0..rank).map(|i| root[i] * cartan[i][j]).sum();
                    let mut img = root.clone();
                    img[j] -= pairing;
                    if img.iter().all(|&c| c >= 0) && !seen.contains_key(&img) {
                        seen.insert(img.clone(), ());
                        new_roots.push(img);
                    }
                }
            }
            if new_roots.is_empty() {
                break;
            }
            pos.extend(new_roots);
        }
        pos.sort_by_key(|root| (root.iter().sum::<i64>(), root.clone()));
        let index: HashMap<Root, usize> = pos.iter().cloned().zip(0..).collect();

        let mut refl = Vec::with_capacity(rank);
        for j in 0..rank {
            let mut m = Matrix::identity(rank);
            for i in 0..rank {
                let v = m.at(j, i) - rat(cartan[i][j]);
                m.set(j, i, v);
            }
            refl.push(m);
        }

        let rs = RootSystem {
            label: label.trim().to_string(),
            series,
            rank,
            cartan,
            d,
            positive_roots: pos,
            simple_reflection_matrices: refl,
            index,
        };
        assert_eq!(rs.positive_roots.len(), rs.expected_positive_count());
        Ok(rs)
    }

    pub fn expected_positive_count(&self) -> usize {
        let r = self.rank;
        match self.series {
            Series::A => r * (r + 1) / 2,
            Series::B | Series::C => r * r,
            Series::D => r * (r - 1),
            Series::G => 6,
        }
    }

    pub fn num_positive(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn is_positive_root(&self, root: &Root) -> bool {
        self.index.contains_key(root)
    }

    /// Index of a positive root.
    pub fn root_index(&self, root: &Root) -> Option<usize> {
        self.index.get(root).copied()
    }

    /// Is the (possibly negative) vector a root?
    pub fn is_root(&self, v: &Root) -> bool {
        if self.index.contains_key(v) {
            return true;
        }
        let neg: Root = v.iter().map(|c| -c).collect();
        self.index.contains_key(&neg)
    }

    pub fn height(root: &Root) -> i64 {
        root.iter().sum()
    }

    /// Inner product (α, β) with short roots normalized to (α, α) = 2.
    pub fn inner(&self, a: &Root, b: &Root) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if b[j] == 0 {
                    continue;
                }
                acc += rat(a[i] * b[j] * self.cartan[i][j] * self.d[j]);
            }
        }
        acc
    }

    /// ⟨β, α^∨⟩ = 2(β,α)/(α,α).
    pub fn pairing(&self, beta: &Root, alpha: &Root) -> Rational {
        rat(2) * self.inner(beta, alpha) / self.inner(alpha, alpha)
    }

    /// Length of the α-string through β below β: max k with β − kα a root.
    fn string_down(&self, alpha: &Root, beta: &Root) -> i64 {
        let mut k = 0i64;
        loop {
            let probe: Root =
                (0..self.rank).map(|i| beta[i] - (k + 1) * alpha[i]).collect();
            if probe.iter().all(|&c| c == 0) || !self.is_root(&probe) {
                return k;
            }
            k += 1;
        }
    }

    /// Action of a simple reflection on a root vector.
    pub fn reflect_root(&self, j: usize, root: &Root) -> Root {
        let pairing: i64 = (0..self.rank).map(|i| root[i] * self.cartan[i][j]).sum();
        let mut img = root.clone();
        img[j] -= pairing;
        img
    }
}

/// Signed reference to a root: positive index, possibly negated.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct SRoot {
    idx: usize,
    neg: bool,
}

impl SRoot {
    fn negated(self) -> SRoot {
        SRoot { idx: self.idx, neg: !self.neg }
    }
}

/// Computes the Chevalley structure constants N_{α,β} from the extraspecial
/// pair convention: for each non-simple positive root γ the special pair
/// (α, β), α + β = γ, with α minimal in the height-lex order gets
/// N_{α,β} = p + 1 > 0, and all other constants follow from the Jacobi
/// identity and the invariance of the form.
struct ChevalleyConstants<'a> {
    rs: &'a RootSystem,
    extraspecial: Vec<Option<(usize, usize)>>,
    memo: HashMap<(SRoot, SRoot), Rational>,
}

impl<'a> ChevalleyConstants<'a> {
    fn new(rs: &'a RootSystem) -> Self {
        let mut extraspecial = vec![None; rs.num_positive()];
        for (g, gamma) in rs.positive_roots.iter().enumerate() {
            if RootSystem::height(gamma) == 1 {
                continue;
            }
            for (a, alpha) in rs.positive_roots.iter().enumerate() {
                let rest: Root = (0..rs.rank).map(|i| gamma[i] - alpha[i]).collect();
                if rest.iter().all(|&c| c >= 0) {
                    if let Some(b) = rs.root_index(&rest) {
                        if a < b {
                            extraspecial[g] = Some((a, b));
                            break;
                        }
                    }
                }
            }
            assert!(extraspecial[g].is_some(), "no special pair for a non-simple root");
        }
        ChevalleyConstants { rs, extraspecial, memo: HashMap::new() }
    }

    fn root_vec(&self, s: SRoot) -> Root {
        let r = &self.rs.positive_roots[s.idx];
        if s.neg {
            r.iter().map(|c| -c).collect()
        } else {
            r.clone()
        }
    }

    fn sroot_of(&self, v: &Root) -> Option<SRoot> {
        if let Some(idx) = self.rs.root_index(v) {
            return Some(SRoot { idx, neg: false });
        }
        let neg: Root = v.iter().map(|c| -c).collect();
        self.rs.root_index(&neg).map(|idx| SRoot { idx, neg: true })
    }

    fn sum(&self, a: SRoot, b: SRoot) -> Option<SRoot> {
        let va = self.root_vec(a);
        let vb = self.root_vec(b);
        let v: Root = (0..self.rs.rank).map(|i| va[i] + vb[i]).collect();
        if v.iter().all(|&c| c == 0) {
            return None;
        }
        self.sroot_of(&v)
    }

    fn norm(&self, s: SRoot) -> Rational {
        let v = self.root_vec(s);
        self.rs.inner(&v, &v)
    }

    fn p_of(&self, a: SRoot, b: SRoot) -> i64 {
        self.rs.string_down(&self.root_vec(a), &self.root_vec(b))
    }

    /// N_{α,β}; zero when α + β is not a root.
    fn n(&mut self, a: SRoot, b: SRoot) -> Rational {
        if self.sum(a, b).is_none() {
            return Rational::zero();
        }
        if let Some(v) = self.memo.get(&(a, b)) {
            return v.clone();
        }
        let val = self.compute(a, b);
        self.memo.insert((a, b), val.clone());
        val
    }

    fn compute(&mut self, a: SRoot, b: SRoot) -> Rational {
        match (a.neg, b.neg) {
            (false, false) => {
                if a.idx > b.idx {
                    return -self.n(b, a);
                }
                let g = self.sum(a, b).expect("sum is a root");
                assert!(!g.neg);
                let (api, bpi) = self.extraspecial[g.idx].expect("non-simple root");
                if (a.idx, b.idx) == (api, bpi) {
                    return rat(self.p_of(a, b) + 1);
                }
                // Jacobi identity on (α', β', −α), whose sum is β.
                let ap = SRoot { idx: api, neg: false };
                let bp = SRoot { idx: bpi, neg: false };
                let na = a.negated();
                let t1 = self.n(bp, na) * self.n_of_sum(bp, na, ap);
                let t2 = self.n(na, ap) * self.n_of_sum(na, ap, bp);
                let gg = self.norm(g);
                let bb = self.norm(b);
                let nprime = self.n(ap, bp);
                (t1 + t2) * gg / (bb * nprime)
            }
            (true, true) => -self.n(a.negated(), b.negated()),
            (true, false) => -self.n(b, a),
            (false, true) => {
                // α positive, β negative, γ = α + β a root.
                let g = self.sum(a, b).expect("sum is a root");
                if !g.neg {
                    // N_{α,β} = −(γ,γ)/(α,α) · N_{−β,γ}
                    let v = self.n(b.negated(), g);
                    -self.norm(g) / self.norm(a) * v
                } else {
                    // N_{α,β} = (γ,γ)/(β,β) · N_{−γ,α}
                    let v = self.n(g.negated(), a);
                    self.norm(g) / self.norm(b) * v
                }
            }
        }
    }

    /// N_{x+y, z} with a guard for x + y not being a root.
    fn n_of_sum(&mut self, x: SRoot, y: SRoot, z: SRoot) -> Rational {
        match self.sum(x, y) {
            Some(s) => self.n(s, z),
            None => Rational::zero(),
        }
    }
}

type SparseVec = Vec<(usize, Rational)>;

/// Bracket table of a finite-dimensional Lie algebra over ℚ.
#[derive(Clone)]
pub struct Brackets {
    pub dim: usize,
    table: Vec<SparseVec>,
}

impl Brackets {
    pub fn new_zero(dim: usize) -> Self {
        Brackets { dim, table: vec![Vec::new(); dim * dim] }
    }

    pub fn entry(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim + j]
    }

    fn set_entry(&mut self, i: usize, j: usize, v: SparseVec) {
        self.table[i * self.dim + j] = v;
    }

    /// [x, y] for coefficient vectors.
    pub fn bracket_vec(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![Rational::zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for (k, coef) in self.entry(i, j) {
                    out[*k] += &c * coef;
                }
            }
        }
        out
    }

    /// Matrix of ad_x: y ↦ [x, y].
    pub fn ad_matrix(&self, x: &[Rational]) -> Matrix {
        assert_eq!(x.len(), self.dim, "ad of a vector of wrong dimension");
        let mut m = Matrix::zero(self.dim, self.dim);
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for (k, coef) in self.entry(i, j) {
                    let v = m.at(*k, j) + &x[i] * coef;
                    m.set(*k, j, v);
                }
            }
        }
        m
    }

    /// Verifies the Jacobi identity on all basis triples. Exact; O(dim³).
    pub fn jacobi_holds(&self) -> bool {
        let n = self.dim;
        let basis: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); n];
                v[i] = rat(1);
                v
            })
            .collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let bij = self.bracket_vec(&basis[i], &basis[j]);
                for k in (j + 1)..n {
                    let mut total = self.bracket_vec(&bij, &basis[k]);
                    let bjk = self.bracket_vec(&basis[j], &basis[k]);
                    let t2 = self.bracket_vec(&bjk, &basis[i]);
                    let bki = self.bracket_vec(&basis[k], &basis[i]);
                    let t3 = self.bracket_vec(&bki, &basis[j]);
                    for l in 0..n {
                        total[l] += &t2[l] + &t3[l];
                    }
                    if total.iter().any(|c| !c.is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Direct sum of bracket tables.
    pub fn direct_sum(parts: &[&Brackets]) -> Brackets {
        let dim = parts.iter().map(|p| p.dim).sum();
        let mut out = Brackets::new_zero(dim);
        let mut offset = 0;
        for p in parts {
            for i in 0..p.dim {
                for j in 0..p.dim {
                    let shifted: SparseVec = p
                        .entry(i, j)
                        .iter()
                        .map(|(k, c)| (k + offset, c.clone()))
                        .collect();
                    out.set_entry(offset + i, offset + j, shifted);
                }
            }
            offset += p.dim;
        }
        out
    }

    /// exp(ad_x) for x with nilpotent ad. Panics if ad_x is not nilpotent.
    pub fn exp_ad(&self, x: &[Rational]) -> Matrix {
        let ad = self.ad_matrix(x);
        let mut result = Matrix::identity(self.dim);
        let mut term = Matrix::identity(self.dim);
        for k in 1..=(self.dim + 1) {
            term = ad.mul(&term).scale(&ratio(1, k as i64));
            if term.is_zero() {
                return result;
            }
            result = result.add(&term);
        }
        panic!("exp_ad called on a non-nilpotent element");
    }
}

/// A simple Lie algebra in a Chevalley-type basis
/// {h_1..h_r} ∪ {e_γ : γ ∈ Δ_+} ∪ {f_γ : γ ∈ Δ_+}, where h_i = α_i^∨,
/// normalized so that ⟨e_γ, f_γ⟩ = 1 and short roots have ⟨α, α⟩ = 2.
#[derive(Clone)]
pub struct LieAlgebra {
    pub rs: RootSystem,
    pub dim: usize,
    pub labels: Vec<String>,
    pub br: Brackets,
    /// Gram matrix of the invariant form in this basis.
    pub form: Matrix,
    /// Gram matrix of the form restricted to the Cartan (coroot basis).
    pub h_gram: Matrix,
    pub cartan: Subspace,
    pub nilpotent_pos: Subspace,
    pub nilpotent_neg: Subspace,
    pub borel_pos: Subspace,
    pub borel_neg: Subspace,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra({}, dim {})", self.rs.label, self.dim)
    }
}

impl LieAlgebra {
    /// Builds the algebra for a root system. The structure constants satisfy
    /// N = ±(p+1) with extraspecial pairs positive; this is asserted, and the
    /// Jacobi identity is verified exhaustively in debug builds.
    pub fn build(rs: &RootSystem) -> LieAlgebra {
        let r = rs.rank;
        let p = rs.num_positive();
        let dim = r + 2 * p;
        let idx_h = |i: usize| i;
        let idx_e = |a: usize| r + a;
        let idx_f = |a: usize| r + p + a;

        let mut cc = ChevalleyConstants::new(rs);
        let pose = |a: usize| SRoot { idx: a, neg: false };
        let nege = |a: usize| SRoot { idx: a, neg: true };

        let mut br = Brackets::new_zero(dim);
        let push = |br: &mut Brackets, i: usize, j: usize, v: SparseVec| {
            let negd: SparseVec = v.iter().map(|(k, c)| (*k, -c)).collect();
            br.set_entry(i, j, v);
            br.set_entry(j, i, negd);
        };

        // [h_i, e_γ] = ⟨γ, α_i^∨⟩ e_γ and the f-side analogue.
        for i in 0..r {
            for (a, gamma) in rs.positive_roots.iter().enumerate() {
                let pairing: i64 = (0..r).map(|k| gamma[k] * rs.cartan[k][i]).sum();
                if pairing != 0 {
                    push(&mut br, idx_h(i), idx_e(a), vec![(idx_e(a), rat(pairing))]);
                    push(&mut br, idx_h(i), idx_f(a), vec![(idx_f(a), rat(-pairing))]);
                }
            }
        }

        // Root-vector brackets. In the normalized basis e_γ = ê_γ and
        // f_γ = d_γ ê_{−γ}, so [e_γ, f_γ] = t_γ = Σ m_i d_i h_i.
        let d_of = |a: usize| -> Rational {
            let v = &rs.positive_roots[a];
            rs.inner(v, v) / rat(2)
        };
        for a in 0..p {
            for b in 0..p {
                if a == b {
                    let gamma = &rs.positive_roots[a];
                    let t: SparseVec = (0..r)
                        .filter(|&i| gamma[i] != 0)
                        .map(|i| (idx_h(i), rat(gamma[i] * rs.d[i])))
                        .collect();
                    push(&mut br, idx_e(a), idx_f(a), t);
                    continue;
                }
                if b > a {
                    // [e_a, e_b] = N_{a,b} e_{a+b}
                    let nab = cc.n(pose(a), pose(b));
                    if !nab.is_zero() {
                        let s = cc.sum(pose(a), pose(b)).unwrap();
                        assert!(!s.neg);
                        push(&mut br, idx_e(a), idx_e(b), vec![(idx_e(s.idx), nab)]);
                    }
                    // [f_a, f_b] = d_a d_b / d_{a+b} · N_{−a,−b} f_{a+b}
                    let nfab = cc.n(nege(a), nege(b));
                    if !nfab.is_zero() {
                        let s = cc.sum(nege(a), nege(b)).unwrap();
                        assert!(s.neg);
                        let coef = d_of(a) * d_of(b) / d_of(s.idx) * nfab;
                        push(&mut br, idx_f(a), idx_f(b), vec![(idx_f(s.idx), coef)]);
                    }
                }
                // [e_a, f_b] with a ≠ b: lands on e_{a−b} or f_{b−a}.
                let nab = cc.n(pose(a), nege(b));
                if !nab.is_zero() {
                    let s = cc.sum(pose(a), nege(b)).unwrap();
                    let (coef, target) = if s.neg {
                        (d_of(b) / d_of(s.idx) * nab, idx_f(s.idx))
                    } else {
                        (d_of(b) * nab, idx_e(s.idx))
                    };
                    push(&mut br, idx_e(a), idx_f(b), vec![(target, coef)]);
                }
            }
        }

        // Structure-constant magnitudes: |N_{α,β}| = p_{α,β} + 1 on positive pairs.
        for a in 0..p {
            for b in (a + 1)..p {
                let nab = cc.n(pose(a), pose(b));
                if !nab.is_zero() {
                    let expect = rat(cc.p_of(pose(a), pose(b)) + 1);
                    assert!(
                        nab == expect || nab == -expect,
                        "structure constant magnitude violated for pair ({a},{b})"
                    );
                }
            }
        }

        // Invariant form: ⟨h_i, h_j⟩ = cartan[i][j]/d_i, ⟨e_γ, f_γ⟩ = 1.
        let mut form = Matrix::zero(dim, dim);
        for i in 0..r {
            for j in 0..r {
                form.set(i, j, ratio(rs.cartan[i][j], rs.d[i]));
            }
        }
        for a in 0..p {
            form.set(idx_e(a), idx_f(a), rat(1));
            form.set(idx_f(a), idx_e(a), rat(1));
        }
        let h_gram = form.submatrix(0..r, 0..r);

        let mut labels = Vec::with_capacity(dim);
        for i in 0..r {
            labels.push(format!("h{}", i + 1));
        }
        for which in ["e", "f"] {
            for gamma in &rs.positive_roots {
                let coords: Vec<String> = gamma.iter().map(|c| c.to_string()).collect();
                labels.push(format!("{which}[{}]", coords.join(",")));
            }
        }

        let unit = |k: usize| {
            let mut v = vec![Rational::zero(); dim];
            v[k] = rat(1);
            v
        };
        let span =
            |ids: Vec<usize>| Subspace::from_spanning(dim, ids.into_iter().map(unit).collect());
        let cartan = span((0..r).collect());
        let nilpotent_pos = span((0..p).map(idx_e).collect());
        let nilpotent_neg = span((0..p).map(idx_f).collect());
        let borel_pos = cartan.sum(&nilpotent_pos);
        let borel_neg = cartan.sum(&nilpotent_neg);

        let g = LieAlgebra {
            rs: rs.clone(),
            dim,
            labels,
            br,
            form,
            h_gram,
            cartan,
            nilpotent_pos,
            nilpotent_neg,
            borel_pos,
            borel_neg,
        };
        debug_assert!(g.br.jacobi_holds(), "Jacobi identity failed");
        debug_assert!(g.form_is_invariant(), "form invariance failed");
        g
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    pub fn num_positive(&self) -> usize {
        self.rs.num_positive()
    }

    pub fn idx_h(&self, i: usize) -> usize {
        i
    }

    pub fn idx_e(&self, a: usize) -> usize {
        self.rs.rank + a
    }

    pub fn idx_f(&self, a: usize) -> usize {
        self.rs.rank + self.rs.num_positive() + a
    }

    pub fn basis_vec(&self, k: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[k] = rat(1);
        v
    }

    /// ⟨x, y⟩ for coefficient vectors.
    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let fy = self.form.mul_vec(y);
        let mut acc = Rational::zero();
        for i in 0..self.dim {
            if !x[i].is_zero() && !fy[i].is_zero() {
                acc += &x[i] * &fy[i];
            }
        }
        acc
    }

    /// ⟨[x,y],z⟩ + ⟨y,[x,z]⟩ = 0, as the matrix identity adᵀG + G ad = 0.
    pub fn form_is_invariant(&self) -> bool {
        for i in 0..self.dim {
            let ad = self.br.ad_matrix(&self.basis_vec(i));
            let lhs = ad.transpose().mul(&self.form).add(&self.form.mul(&ad));
            if !lhs.is_zero() {
                return false;
            }
        }
        true
    }

    /// Matrix of ad_x in the stored basis.
    pub fn ad_matrix(&self, x: &[Rational]) -> Matrix {
        self.br.ad_matrix(x)
    }

    /// Position of the i-th simple root in the positive-root ordering.
    pub fn simple_root_pos(&self, i: usize) -> usize {
        let mut unit = vec![0i64; self.rs.rank];
        unit[i] = 1;
        self.rs.root_index(&unit).expect("simple root is a positive root")
    }

    /// Adjoint action of the standard representative of the i-th simple
    /// reflection: exp(ad e) exp(−ad f′) exp(ad e) for the sl2 triple
    /// (e, α^∨, f′) of the simple root, where f′ = f/d rescales the stored
    /// f so that [e, f′] = α^∨. Exact and rational.
    pub fn simple_reflection_ad(&self, i: usize) -> Matrix {
        let a = self.simple_root_pos(i);
        let e = self.basis_vec(self.idx_e(a));
        let d = rat(self.rs.d[i]);
        let neg_f: Vec<Rational> = self
            .basis_vec(self.idx_f(a))
            .iter()
            .map(|c| -(c / &d))
            .collect();
        let ea = self.br.exp_ad(&e);
        let fb = self.br.exp_ad(&neg_f);
        ea.mul(&fb).mul(&ea)
    }

    /// Adjoint action of a formal torus element with coordinate values
    /// t = (t_1..t_r) ∈ (ℚ*)^r: fixes h and scales e_γ by Π t_i^{γ_i}.
    pub fn torus_ad(&self, t: &[Rational]) -> Matrix {
        assert_eq!(t.len(), self.rs.rank);
        assert!(t.iter().all(|v| !v.is_zero()), "torus coordinates must be nonzero");
        let mut m = Matrix::identity(self.dim);
        for (a, gamma) in self.rs.positive_roots.iter().enumerate() {
            let mut scale = rat(1);
            for (i, &c) in gamma.iter().enumerate() {
                let mut k = c;
                while k > 0 {
                    scale *= &t[i];
                    k -= 1;
                }
                while k < 0 {
                    scale /= &t[i];
                    k += 1;
                }
            }
            m.set(self.idx_e(a), self.idx_e(a), scale.clone());
            m.set(self.idx_f(a), self.idx_f(a), scale.recip());
        }
        m
    }

    /// Coefficient vector of the Cartan component.
    pub fn h_part(&self, x: &[Rational]) -> Vec<Rational> {
        x[0..self.rs.rank].to_vec()
    }
}
