//! Cocategory homomorphisms and coderivations of truncated tensor
//! coalgebras, stored by components, and the mixed expansion θ.
//!
//! A component table maps a composable word of source morphisms to a linear
//! combination of target morphisms; absent entries are zero.  Expansions are
//! evaluated word by word instead of materialising full matrices.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::quiver::{Category, ObjId, Word};
use crate::scalars::{Lin, Ring, Scalar};

/// Components `f_n` (`n ≥ 1`) of a cocategory homomorphism `T s𝒜 → T sℬ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocatHom<A: Ord, B: Ord> {
    pub obj_map: Vec<ObjId>,
    pub comps: BTreeMap<Vec<A>, Lin<B>>,
}

impl<A: Ord + Clone, B: Ord + Clone> CocatHom<A, B> {
    pub fn new(obj_map: Vec<ObjId>) -> Self {
        CocatHom { obj_map, comps: BTreeMap::new() }
    }

    pub fn component(&self, word: &[A]) -> Option<&Lin<B>> {
        self.comps.get(word)
    }

    pub fn set(&mut self, word: Vec<A>, value: Lin<B>) -> Result<()> {
        if word.is_empty() {
            return Err(Error::Precondition("a cocategory homomorphism has no 0-component".into()));
        }
        if value.is_zero() {
            self.comps.remove(&word);
        } else {
            self.comps.insert(word, value);
        }
        Ok(())
    }

    /// Largest word length with a nonzero component.
    pub fn max_arity(&self) -> usize {
        self.comps.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Keeps only the components of length ≤ `n`.
    pub fn truncated(&self, n: usize) -> Self {
        CocatHom {
            obj_map: self.obj_map.clone(),
            comps: self.comps.iter().filter(|(k, _)| k.len() <= n).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }
}

impl<M: Ord + Clone> CocatHom<M, M> {
    /// The identity functor on the listed basis morphisms.
    pub fn identity(objects: usize, basis: impl IntoIterator<Item = M>, ring: &Ring) -> Self {
        let mut f = CocatHom::new((0..objects).collect());
        for m in basis {
            f.comps.insert(vec![m.clone()], Lin::single(m, ring.one()));
        }
        f
    }
}

/// Components `r_n` (`n ≥ 0`) of a coderivation between two cocategory
/// homomorphisms; the key carries the start object so that `r_0` has one
/// entry per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coderivation<A: Ord, B: Ord> {
    pub comps: BTreeMap<Word<A>, Lin<B>>,
}

impl<A: Ord, B: Ord> Default for Coderivation<A, B> {
    fn default() -> Self {
        Coderivation { comps: BTreeMap::new() }
    }
}

impl<A: Ord + Clone, B: Ord + Clone> Coderivation<A, B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn component(&self, word: &Word<A>) -> Option<&Lin<B>> {
        self.comps.get(word)
    }

    pub fn add_at(&mut self, word: Word<A>, value: &Lin<B>, c: &Scalar) {
        let entry = self.comps.entry(word).or_default();
        entry.add_scaled(value, c);
        if entry.is_zero() {
            self.comps.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_scaled(&mut self, other: &Coderivation<A, B>, c: &Scalar) {
        for (w, v) in &other.comps {
            self.add_at(w.clone(), v, c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn minus(&self, other: &Self, ring: &Ring) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-ring.one());
        out
    }

    /// Keeps the components on words satisfying `keep`.
    pub fn filtered(&self, keep: impl Fn(&Word<A>) -> bool) -> Self {
        Coderivation { comps: self.comps.iter().filter(|(w, _)| keep(w)).map(|(w, v)| (w.clone(), v.clone())).collect() }
    }

    /// Common degree of all terms, if homogeneous; `None` for zero or mixed.
    pub fn degree<S, T>(&self, src: &S, tgt: &T) -> Option<i64>
    where
        S: Category<Mor = A>,
        T: Category<Mor = B>,
    {
        let mut deg = None;
        for (w, v) in &self.comps {
            for (m, _) in v {
                let d = tgt.degree(m) - w.degree(src);
                match deg {
                    None => deg = Some(d),
                    Some(e) if e != d => return None,
                    _ => {}
                }
            }
        }
        deg
    }
}

/// One stage of a θ expansion: a functor (any number of nonempty blocks, each
/// mapped by a component) or a coderivation (exactly one possibly empty block).
enum Stage<'a, A: Ord, B: Ord> {
    Functor(&'a CocatHom<A, B>),
    Coder(&'a Coderivation<A, B>),
}

/// θ(f⁰, r¹, f¹, …, rⁿ, fⁿ) applied to the word `w`: the sum over all ways to
/// cut `w` into consecutive blocks, alternating arbitrarily many nonempty
/// `f^i`-blocks with exactly one `r^i`-block, of the tensor product of the
/// component values.  Each `r^i` term of degree `d` contributes the sign
/// `(−1)^{d·deg(input to the right of its block)}`.
pub fn theta<S: Category, T: Category>(
    src: &S,
    tgt: &T,
    fs: &[&CocatHom<S::Mor, T::Mor>],
    rs: &[&Coderivation<S::Mor, T::Mor>],
    w: &Word<S::Mor>,
) -> Result<Lin<Word<T::Mor>>> {
    if fs.len() != rs.len() + 1 {
        return Err(Error::Precondition(format!(
            "θ needs one more functor than coderivations, got {} and {}",
            fs.len(),
            rs.len()
        )));
    }
    let mut stages = Vec::with_capacity(fs.len() + rs.len());
    for (i, f) in fs.iter().enumerate() {
        stages.push(Stage::Functor(f));
        if let Some(r) = rs.get(i) {
            stages.push(Stage::Coder(r));
        }
    }
    let ring = src.ring().clone();
    // Degree of the suffix starting at each position.
    let mut suffix = vec![0i64; w.len() + 1];
    for i in (0..w.len()).rev() {
        suffix[i] = suffix[i + 1] + src.degree(&w.mors[i]);
    }
    // Object reached after each position.
    let mut objs = Vec::with_capacity(w.len() + 1);
    objs.push(w.start);
    for m in &w.mors {
        objs.push(src.target(m));
    }
    let start = fs[0]
        .obj_map
        .get(w.start)
        .copied()
        .ok_or_else(|| Error::UnknownName(format!("object {} outside the object map", w.start)))?;
    let mut out = Lin::zero();
    let mut acc = Vec::new();
    let ctx = ThetaCtx { src, tgt, w, stages: &stages, suffix: &suffix, objs: &objs, start };
    ctx.rec(0, 0, &mut acc, ring.one(), &mut out);
    Ok(out)
}

struct ThetaCtx<'a, S: Category, T: Category> {
    src: &'a S,
    tgt: &'a T,
    w: &'a Word<S::Mor>,
    stages: &'a [Stage<'a, S::Mor, T::Mor>],
    suffix: &'a [i64],
    objs: &'a [ObjId],
    start: ObjId,
}

impl<S: Category, T: Category> ThetaCtx<'_, S, T> {
    fn rec(&self, pos: usize, stage: usize, acc: &mut Vec<T::Mor>, coeff: Scalar, out: &mut Lin<Word<T::Mor>>) {
        let n = self.w.len();
        match &self.stages[stage] {
            Stage::Functor(f) => {
                if stage + 1 == self.stages.len() {
                    if pos == n {
                        out.add_term(Word { start: self.start, mors: acc.clone() }, coeff.clone());
                    }
                } else {
                    self.rec(pos, stage + 1, acc, coeff.clone(), out);
                }
                for end in pos + 1..=n {
                    if let Some(v) = f.component(&self.w.mors[pos..end]) {
                        for (m, c) in v {
                            acc.push(m.clone());
                            self.rec(end, stage, acc, &coeff * c, out);
                            acc.pop();
                        }
                    }
                }
            }
            Stage::Coder(r) => {
                for end in pos..=n {
                    let block = Word { start: self.objs[pos], mors: self.w.mors[pos..end].to_vec() };
                    if let Some(v) = r.component(&block) {
                        let bdeg = block.degree(self.src);
                        for (m, c) in v {
                            let d = self.tgt.degree(m) - bdeg;
                            acc.push(m.clone());
                            let s = self.src.ring().sign(d * self.suffix[end]);
                            self.rec(end, stage + 1, acc, &(&coeff * c) * &s, out);
                            acc.pop();
                        }
                    }
                }
            }
        }
    }
}

/// Expansion `f_{kl}` of a cocategory homomorphism on `w` (`k = |w|`),
/// restricted to output length `l`.
pub fn hom_matrix_coeff<S: Category, T: Category>(
    src: &S,
    tgt: &T,
    f: &CocatHom<S::Mor, T::Mor>,
    w: &Word<S::Mor>,
    l: usize,
) -> Result<Lin<Word<T::Mor>>> {
    Ok(restrict_len(theta(src, tgt, &[f], &[], w)?, l))
}

/// Expansion `r_{kl}` of a coderivation `r: f → g` on `w`, restricted to
/// output length `l`.
pub fn coder_matrix_coeff<S: Category, T: Category>(
    src: &S,
    tgt: &T,
    f: &CocatHom<S::Mor, T::Mor>,
    r: &Coderivation<S::Mor, T::Mor>,
    g: &CocatHom<S::Mor, T::Mor>,
    w: &Word<S::Mor>,
    l: usize,
) -> Result<Lin<Word<T::Mor>>> {
    Ok(restrict_len(theta(src, tgt, &[f, g], &[r], w)?, l))
}

pub fn restrict_len<M: Ord + Clone>(x: Lin<Word<M>>, l: usize) -> Lin<Word<M>> {
    x.into_terms().into_iter().filter(|(w, _)| w.len() == l).collect()
}

/// Components of the composite `fg` on the given words: `(fg)_k = Σ_l f_{kl} g_l`.
pub fn compose_functors<A: Category, B: Category, C: Category>(
    a: &A,
    b: &B,
    _c: &C,
    f: &CocatHom<A::Mor, B::Mor>,
    g: &CocatHom<B::Mor, C::Mor>,
    words: &[Word<A::Mor>],
) -> Result<CocatHom<A::Mor, C::Mor>> {
    let obj_map = f.obj_map.iter().map(|&y| g.obj_map[y]).collect();
    let mut out = CocatHom::new(obj_map);
    for w in words.iter().filter(|w| !w.is_empty()) {
        let expanded = theta(a, b, &[f], &[], w)?;
        let mut value = Lin::zero();
        for (u, c) in &expanded {
            if let Some(v) = g.component(&u.mors) {
                value.add_scaled(v, c);
            }
        }
        out.set(w.mors.clone(), value)?;
    }
    Ok(out)
}
