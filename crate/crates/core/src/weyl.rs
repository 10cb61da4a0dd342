//! Weyl group combinatorics: canonical reduced words, length, Bruhat order,
//! the monoidal (Demazure) product, Bruhat-cell products, and the signed
//! endomorphisms 1 ± w acting on the Cartan subalgebra.

use crate::exactlin::{rat, Matrix, Rational, Subspace};
use crate::lie_core::RootSystem;
use num_traits::Zero;
use std::collections::HashMap;
use std::fmt;

/// Handle to a Weyl group element. Equality of handles is equality of
/// elements; elements are deduplicated by their reflection matrices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WeylElement(pub usize);

struct ElementData {
    /// ShortLex-minimal reduced word, as simple-reflection indices.
    word: Vec<usize>,
    /// Action on h* in simple-root coordinates.
    matrix: Matrix,
}

/// A finite Weyl group with all elements enumerated breadth-first, so that
/// element ids are sorted by (length, word) and id 0 is the identity.
pub struct WeylGroup {
    pub rs: RootSystem,
    elements: Vec<ElementData>,
    right_mul: Vec<Vec<WeylElement>>,
    longest: WeylElement,
}

impl fmt::Debug for WeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylGroup({}, order {})", self.rs.label, self.elements.len())
    }
}

impl WeylGroup {
    /// Enumerates the full group by breadth-first multiplication with matrix
    /// deduplication. The first word reaching an element is its canonical
    /// (ShortLex-minimal) reduced word.
    pub fn build(rs: &RootSystem) -> WeylGroup {
        let rank = rs.rank;
        let mut elements = vec![ElementData { word: Vec::new(), matrix: Matrix::identity(rank) }];
        let mut index: HashMap<Vec<Rational>, usize> = HashMap::new();
        index.insert(matrix_key(&elements[0].matrix), 0);
        let mut right_mul: Vec<Vec<Option<usize>>> = vec![vec![None; rank]];
        let mut head = 0usize;
        while head < elements.len() {
            for i in 0..rank {
                if right_mul[head][i].is_some() {
                    continue;
                }
                let m = elements[head].matrix.mul(&rs.simple_reflection_matrices[i]);
                let key = matrix_key(&m);
                let target = match index.get(&key) {
                    Some(&t) => t,
                    None => {
                        let mut word = elements[head].word.clone();
                        word.push(i);
                        elements.push(ElementData { word, matrix: m });
                        right_mul.push(vec![None; rank]);
                        let t = elements.len() - 1;
                        index.insert(key, t);
                        t
                    }
                };
                right_mul[head][i] = Some(target);
                right_mul[target][i] = Some(head); // s_i is an involution
            }
            head += 1;
        }
        let longest =
            WeylElement((0..elements.len()).max_by_key(|&k| elements[k].word.len()).unwrap());
        WeylGroup {
            rs: rs.clone(),
            elements,
            right_mul: right_mul
                .into_iter()
                .map(|row| row.into_iter().map(|t| WeylElement(t.unwrap())).collect())
                .collect(),
            longest,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement(0)
    }

    pub fn longest_element(&self) -> WeylElement {
        self.longest
    }

    pub fn generator(&self, i: usize) -> WeylElement {
        self.right_mul[0][i]
    }

    /// All elements in enumeration order: by length, then lexicographic word.
    pub fn all_elements(&self) -> Vec<WeylElement> {
        (0..self.elements.len()).map(WeylElement).collect()
    }

    /// Canonical reduced word.
    pub fn word(&self, w: WeylElement) -> &[usize] {
        &self.elements[w.0].word
    }

    pub fn length(&self, w: WeylElement) -> usize {
        self.elements[w.0].word.len()
    }

    /// Action on h* in simple-root coordinates.
    pub fn matrix(&self, w: WeylElement) -> &Matrix {
        &self.elements[w.0].matrix
    }

    pub fn right_multiply(&self, w: WeylElement, i: usize) -> WeylElement {
        self.right_mul[w.0][i]
    }

    pub fn multiply(&self, u: WeylElement, v: WeylElement) -> WeylElement {
        let mut acc = u;
        for &i in self.word(v) {
            acc = self.right_multiply(acc, i);
        }
        acc
    }

    pub fn inverse(&self, w: WeylElement) -> WeylElement {
        let mut acc = self.identity();
        for &i in self.word(w).iter().rev() {
            acc = self.right_multiply(acc, i);
        }
        acc
    }

    pub fn product_of(&self, seq: &[WeylElement]) -> WeylElement {
        seq.iter().fold(self.identity(), |acc, &w| self.multiply(acc, w))
    }

    /// Number of positive roots sent negative; must equal the word length.
    pub fn inversion_count(&self, w: WeylElement) -> usize {
        let m = self.matrix(w);
        self.rs
            .positive_roots
            .iter()
            .filter(|root| {
                let coords: Vec<Rational> = root.iter().map(|&c| rat(c)).collect();
                let img = m.mul_vec(&coords);
                img.iter().all(|c| c <= &Rational::zero())
            })
            .count()
    }

    /// Bruhat order via the subword property, tested against the canonical
    /// word of y: x ≤ y iff some subword of it is a word for x.
    pub fn bruhat_leq(&self, x: WeylElement, y: WeylElement) -> bool {
        let lx = self.length(x);
        let ly = self.length(y);
        if lx > ly {
            return false;
        }
        if lx == ly {
            return x == y;
        }
        let wy = self.word(y).to_vec();
        self.subword_reaches(x, &wy, lx)
    }

    fn subword_reaches(&self, x: WeylElement, word: &[usize], lx: usize) -> bool {
        if lx == 0 {
            return x == self.identity();
        }
        let n = word.len();
        let mut picks: Vec<usize> = (0..lx).collect();
        loop {
            let mut acc = self.identity();
            for &p in &picks {
                acc = self.right_multiply(acc, word[p]);
            }
            if acc == x {
                return true;
            }
            // Next index combination.
            let mut i = lx;
            loop {
                if i == 0 {
                    return false;
                }
                i -= 1;
                if picks[i] != i + n - lx {
                    picks[i] += 1;
                    for j in (i + 1)..lx {
                        picks[j] = picks[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Bruhat order via the lifting property, as an independent cross-check.
    pub fn bruhat_leq_lifting(&self, x: WeylElement, y: WeylElement) -> bool {
        if self.length(x) > self.length(y) {
            return false;
        }
        if x == self.identity() {
            return true;
        }
        let s = self.word(y)[0];
        let sy = self.multiply(self.generator(s), y);
        debug_assert!(self.length(sy) < self.length(y));
        let sx = self.multiply(self.generator(s), x);
        if self.length(sx) < self.length(x) {
            self.bruhat_leq_lifting(sx, sy)
        } else {
            self.bruhat_leq_lifting(x, sy)
        }
    }

    /// Monoidal (Demazure) product: u ∗ s = us if the length goes up, else u,
    /// folded over a reduced word of v.
    pub fn demazure(&self, u: WeylElement, v: WeylElement) -> WeylElement {
        let mut acc = u;
        for &i in self.word(v) {
            let next = self.right_multiply(acc, i);
            if self.length(next) > self.length(acc) {
                acc = next;
            }
        }
        acc
    }

    pub fn demazure_of(&self, seq: &[WeylElement]) -> WeylElement {
        seq.iter().fold(self.identity(), |acc, &w| self.demazure(acc, w))
    }

    /// One step of the Bruhat-cell product recursion X ↦ X·(cell of s):
    /// emits xs when the length goes up, otherwise both x and xs.
    pub fn bruhat_cell_product(&self, set: &[WeylElement], s: usize) -> Vec<WeylElement> {
        let mut out: Vec<WeylElement> = Vec::new();
        for &x in set {
            let xs = self.right_multiply(x, s);
            if self.length(xs) > self.length(x) {
                push_unique(&mut out, xs);
            } else {
                push_unique(&mut out, x);
                push_unique(&mut out, xs);
            }
        }
        out.sort();
        out
    }

    /// Cells appearing in the product of the cells of a sequence, computed by
    /// folding the recursion over the concatenated reduced words.
    pub fn cell_product_set(&self, seq: &[WeylElement]) -> Vec<WeylElement> {
        let mut set = vec![self.identity()];
        for &u in seq {
            for &i in self.word(u) {
                set = self.bruhat_cell_product(&set, i);
            }
        }
        set
    }

    /// Kernel dimension and canonical image of 1 + sign·w acting on h,
    /// in the simple-root chart transported by the invariant form.
    pub fn signed_endomorphism(&self, sign: i64, w: WeylElement) -> (usize, Subspace) {
        assert!(sign == 1 || sign == -1);
        let r = self.rs.rank;
        let m = self.matrix(w);
        let op =
            if sign == 1 { Matrix::identity(r).add(m) } else { Matrix::identity(r).sub(m) };
        let image = Subspace::from_matrix_rows(&op.transpose());
        (r - image.dim(), image)
    }

    /// Renders the canonical word, e.g. "s1 s2 s1"; the identity is "e".
    pub fn render(&self, w: WeylElement) -> String {
        if w == self.identity() {
            return "e".to_string();
        }
        self.word(w).iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join(" ")
    }

    /// Parses "e" or whitespace-separated generators like "s1 s2 s1".
    pub fn parse(&self, s: &str) -> Option<WeylElement> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Some(self.identity());
        }
        let mut acc = self.identity();
        for tok in s.split_whitespace() {
            let idx: usize = tok.strip_prefix('s')?.parse().ok()?;
            if idx == 0 || idx > self.rs.rank {
                return None;
            }
            acc = self.right_multiply(acc, idx - 1);
        }
        Some(acc)
    }
}

fn matrix_key(m: &Matrix) -> Vec<Rational> {
    let mut key = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        key.extend(m.row(i).iter().cloned());
    }
    key
}

fn push_unique(v: &mut Vec<WeylElement>, w: WeylElement) {
    if !v.contains(&w) {
        v.push(w);
    }
}
