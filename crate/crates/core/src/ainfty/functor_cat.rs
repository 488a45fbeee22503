//! The functor A_∞-category on a finite list of functors, truncated by the
//! length and weight of source words.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{b_in_blocks, b_word, check_an_functor};
use crate::error::{Error, Result};
use crate::quiver::{enumerate_words, Category, ObjId, Word};
use crate::scalars::{image_membership, Lin, Ring, Scalar, SparseMatrix};
use crate::tensor::{theta, CocatHom, Coderivation};

/// `(r B_1)(w) = θ(f, r, g)(w)·b − (−1)^{deg r} Σ r((w)(1^{⊗α} ⊗ b_n ⊗ 1^{⊗β}))`.
pub fn b1_at<S: Category, T: Category>(
    src: &S,
    tgt: &T,
    f: &CocatHom<S::Mor, T::Mor>,
    g: &CocatHom<S::Mor, T::Mor>,
    r: &Coderivation<S::Mor, T::Mor>,
    w: &Word<S::Mor>,
) -> Result<Lin<T::Mor>> {
    let mut out = Lin::zero();
    for (u, c) in &theta(src, tgt, &[f, g], &[r], w)? {
        out.add_scaled(&b_word(tgt, u)?, c);
    }
    let ring = src.ring();
    for (w2, c) in &b_in_blocks(src, w)? {
        if let Some(v) = r.component(w2) {
            let d2 = w2.degree(src);
            for (m, e) in v {
                let s = ring.sign(1 + tgt.degree(m) - d2);
                out.add_term(m.clone(), &(c * e) * &s);
            }
        }
    }
    Ok(out)
}

/// `[(r^1 ⊗ … ⊗ r^n) B_n](w) = θ(f^0, r^1, …, r^n, f^n)(w)·b` for `n ≥ 2`;
/// for `n = 1` this is `B_1`.
pub fn bn_at<S: Category, T: Category>(
    src: &S,
    tgt: &T,
    fs: &[&CocatHom<S::Mor, T::Mor>],
    rs: &[&Coderivation<S::Mor, T::Mor>],
    w: &Word<S::Mor>,
) -> Result<Lin<T::Mor>> {
    match rs.len() {
        0 => Err(Error::Precondition("B_0 is not defined".into())),
        1 => b1_at(src, tgt, fs[0], fs[1], rs[0], w),
        _ => {
            let mut out = Lin::zero();
            for (u, c) in &theta(src, tgt, fs, rs, w)? {
                out.add_scaled(&b_word(tgt, u)?, c);
            }
            Ok(out)
        }
    }
}

fn collect<A, B>(
    words: &[Word<A>],
    at: impl Fn(&Word<A>) -> Result<Lin<B>> + Sync,
) -> Result<Coderivation<A, B>>
where
    A: Ord + Clone + Send + Sync,
    B: Ord + Clone + Send + Sync,
{
    let values: Vec<Lin<B>> = words.par_iter().map(&at).collect::<Result<_>>()?;
    Ok(Coderivation {
        comps: words.iter().cloned().zip(values).filter(|(_, v)| !v.is_zero()).collect(),
    })
}

/// `r B_1` on all listed words.
pub fn b1<S: Category, T: Category>(
    src: &S,
    tgt: &T,
    f: &CocatHom<S::Mor, T::Mor>,
    g: &CocatHom<S::Mor, T::Mor>,
    r: &Coderivation<S::Mor, T::Mor>,
    words: &[Word<S::Mor>],
) -> Result<Coderivation<S::Mor, T::Mor>> {
    collect(words, |w| b1_at(src, tgt, f, g, r, w))
}

/// `(r^1 ⊗ … ⊗ r^n) B_n` on all listed words.
pub fn bn<S: Category, T: Category>(
    src: &S,
    tgt: &T,
    fs: &[&CocatHom<S::Mor, T::Mor>],
    rs: &[&Coderivation<S::Mor, T::Mor>],
    words: &[Word<S::Mor>],
) -> Result<Coderivation<S::Mor, T::Mor>> {
    if fs.len() != rs.len() + 1 {
        return Err(Error::Precondition("functor chain does not match the coderivations".into()));
    }
    collect(words, |w| bn_at(src, tgt, fs, rs, w))
}

/// `[(r^1 ⊗ … ⊗ r^n | g) M_{n0}]_k = Σ_l (r^1 ⊗ … ⊗ r^n) θ_{kl} g_l`; zero
/// for `n = 0`.
pub fn m_n0<A: Category, B: Category, C: Category>(
    a: &A,
    b: &B,
    _c: &C,
    fs: &[&CocatHom<A::Mor, B::Mor>],
    rs: &[&Coderivation<A::Mor, B::Mor>],
    g: &CocatHom<B::Mor, C::Mor>,
    words: &[Word<A::Mor>],
) -> Result<Coderivation<A::Mor, C::Mor>> {
    if rs.is_empty() {
        return Ok(Coderivation::zero());
    }
    collect(words, |w| {
        let mut out = Lin::zero();
        for (u, c) in &theta(a, b, fs, rs, w)? {
            if let Some(v) = g.component(&u.mors) {
                out.add_scaled(v, c);
            }
        }
        Ok(out)
    })
}

/// `[(r^1 ⊗ … ⊗ r^n | t) M_{n1}]_k = Σ_l (r^1 ⊗ … ⊗ r^n) θ_{kl} t_l`.
pub fn m_n1<A: Category, B: Category, C: Category>(
    a: &A,
    b: &B,
    _c: &C,
    fs: &[&CocatHom<A::Mor, B::Mor>],
    rs: &[&Coderivation<A::Mor, B::Mor>],
    t: &Coderivation<B::Mor, C::Mor>,
    words: &[Word<A::Mor>],
) -> Result<Coderivation<A::Mor, C::Mor>> {
    collect(words, |w| {
        let mut out = Lin::zero();
        for (u, c) in &theta(a, b, fs, rs, w)? {
            if let Some(v) = t.component(u) {
                out.add_scaled(v, c);
            }
        }
        Ok(out)
    })
}

/// Right-hand factor of a composition: a functor (`m = 0`) or `m`
/// coderivations.
pub enum Tail<'a, B: Ord, C: Ord> {
    Functor(&'a CocatHom<B, C>),
    Coders(Vec<&'a Coderivation<B, C>>),
}

/// `M_{nm}`: dispatches to `M_{n0}`, `M_{n1}`, and returns zero for `m > 1`.
pub fn m_compose<A: Category, B: Category, C: Category>(
    a: &A,
    b: &B,
    c: &C,
    fs: &[&CocatHom<A::Mor, B::Mor>],
    rs: &[&Coderivation<A::Mor, B::Mor>],
    tail: Tail<'_, B::Mor, C::Mor>,
    words: &[Word<A::Mor>],
) -> Result<Coderivation<A::Mor, C::Mor>> {
    match tail {
        Tail::Functor(g) => m_n0(a, b, c, fs, rs, g, words),
        Tail::Coders(ts) => match ts.len() {
            0 => Err(Error::Precondition("M_{n0} needs a functor as tail".into())),
            1 => m_n1(a, b, c, fs, rs, ts[0], words),
            _ => Ok(Coderivation::zero()),
        },
    }
}

/// Both sides of `(1 ⊠ B + B ⊠ 1) M = M B` on `(r^1 ⊗ … ⊗ r^n | τ)`, where
/// `r^i: φ^{i-1} → φ^i` in `A_∞(𝒜, ℬ)` and `τ` is the functor `gs[0]`
/// (`t = None`) or a coderivation `t: gs[0] → gs[1]` in `A_∞(ℬ, 𝒞)`.
/// `a_words` must be closed under subwords and `b_words` must contain every
/// word that `θ(φ, r, …, φ)` produces from them; an `r_0` term lengthens the
/// output, so this means length up to `k + n`.
#[allow(clippy::too_many_arguments, clippy::type_complexity)]
pub fn coherence_sides<A: Category, B: Category, C: Category>(
    a: &A,
    b: &B,
    c: &C,
    phis: &[&CocatHom<A::Mor, B::Mor>],
    rs: &[&Coderivation<A::Mor, B::Mor>],
    gs: &[&CocatHom<B::Mor, C::Mor>],
    t: Option<&Coderivation<B::Mor, C::Mor>>,
    a_words: &[Word<A::Mor>],
    b_words: &[Word<B::Mor>],
) -> Result<(Coderivation<A::Mor, C::Mor>, Coderivation<A::Mor, C::Mor>)> {
    let n = rs.len();
    if phis.len() != n + 1 || gs.len() != 1 + usize::from(t.is_some()) {
        return Err(Error::Precondition("functor chains do not match the coderivations".into()));
    }
    let ring = a.ring().clone();
    let deg = |r: &Coderivation<A::Mor, B::Mor>| r.degree(a, b).unwrap_or(0);
    let deg_t = t.map_or(0, |t| t.degree(b, c).unwrap_or(0));
    let m = |fs: &[&CocatHom<A::Mor, B::Mor>], xs: &[&Coderivation<A::Mor, B::Mor>]| match t {
        Some(t) => m_n1(a, b, c, fs, xs, t, a_words),
        None => m_n0(a, b, c, fs, xs, gs[0], a_words),
    };

    let mut lhs = Coderivation::zero();
    if let Some(t) = t {
        let tb = b1(b, c, gs[0], gs[1], t, b_words)?;
        lhs.add_scaled(&m_n1(a, b, c, phis, rs, &tb, a_words)?, &ring.one());
    }
    for start in 0..n {
        for j in 1..=n - start {
            let x = bn(a, b, &phis[start..=start + j], &rs[start..start + j], a_words)?;
            let mut xs: Vec<&Coderivation<A::Mor, B::Mor>> = rs[..start].to_vec();
            xs.push(&x);
            xs.extend_from_slice(&rs[start + j..]);
            let mut fs: Vec<&CocatHom<A::Mor, B::Mor>> = phis[..=start].to_vec();
            fs.extend_from_slice(&phis[start + j..]);
            let later: i64 = rs[start + j..].iter().map(|r| deg(r)).sum();
            lhs.add_scaled(&m(&fs, &xs)?, &ring.sign(deg_t + later));
        }
    }

    // Composite functors φ^i g^j on the source words.
    let mut composite = BTreeMap::new();
    for (i, f) in phis.iter().enumerate() {
        for (j, g) in gs.iter().enumerate() {
            composite.insert((i, j), crate::tensor::compose_functors(a, b, c, f, g, a_words)?);
        }
    }
    let mut rhs = Coderivation::zero();
    for cuts in cut_points(n, t.is_some()) {
        // `cuts` lists piece boundaries in 0..=n; `tp` is the index of the piece holding t.
        let (bounds, tp) = cuts;
        let l = bounds.len() - 1;
        let mut pieces = Vec::with_capacity(l);
        let mut chain = Vec::with_capacity(l + 1);
        let mut sign = 0i64;
        for p in 0..l {
            let (lo, hi) = (bounds[p], bounds[p + 1]);
            let fs = &phis[lo..=hi];
            let xs = &rs[lo..hi];
            let piece = match (t, tp) {
                (Some(t), Some(q)) if q == p => {
                    sign += deg_t * rs[hi..].iter().map(|r| deg(r)).sum::<i64>();
                    m_n1(a, b, c, fs, xs, t, a_words)?
                }
                (_, Some(q)) => m_n0(a, b, c, fs, xs, gs[usize::from(p > q)], a_words)?,
                (_, None) => m_n0(a, b, c, fs, xs, gs[0], a_words)?,
            };
            pieces.push(piece);
            chain.push(&composite[&(lo, usize::from(tp.is_some_and(|q| p > q)))]);
        }
        chain.push(&composite[&(n, usize::from(tp.is_some()))]);
        let refs: Vec<&Coderivation<A::Mor, C::Mor>> = pieces.iter().collect();
        rhs.add_scaled(&bn(a, c, &chain, &refs, a_words)?, &ring.sign(sign));
    }
    Ok((lhs, rhs))
}

/// Cuts of `r^1 … r^n` (and `t` if present) into pieces: boundaries
/// `0 = c_0 < … < c_l = n`, where the piece holding `t` may be empty.
fn cut_points(n: usize, with_t: bool) -> Vec<(Vec<usize>, Option<usize>)> {
    let mut out = Vec::new();
    // Strictly increasing boundary sequences from 0 to n.
    let mut plain = Vec::new();
    for mask in 0u32..(1 << n.saturating_sub(1)) {
        if n == 0 {
            break;
        }
        let mut b = vec![0];
        for i in 1..n {
            if mask & (1 << (i - 1)) != 0 {
                b.push(i);
            }
        }
        b.push(n);
        plain.push(b);
    }
    if !with_t {
        return plain.into_iter().map(|b| (b, None)).collect();
    }
    // Insert t into an existing piece, or as an empty piece at a boundary.
    for b in &plain {
        for p in 0..b.len() - 1 {
            out.push((b.clone(), Some(p)));
        }
    }
    let mut with_boundaries = plain.clone();
    if n == 0 {
        with_boundaries.push(vec![0]);
    }
    for b in &with_boundaries {
        for (k, &pos) in b.iter().enumerate() {
            let mut nb = b[..=k].to_vec();
            nb.extend_from_slice(&b[k..]);
            let _ = pos;
            out.push((nb, Some(k)));
        }
    }
    out
}

/// A basis element of a truncated hom of the functor category: the
/// coderivation from functor `f` to functor `g` whose only nonzero component
/// sends `word` to `out`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot<A, B> {
    pub f: usize,
    pub g: usize,
    pub word: Word<A>,
    pub out: B,
}

/// A truncated hom `sA(𝒜,ℬ)(f, g)` with its slot basis.
#[derive(Clone, Debug)]
pub struct HomSpace<A: Ord, B: Ord> {
    pub f: usize,
    pub g: usize,
    pub slots: Vec<(Word<A>, B)>,
    pub degrees: Vec<i64>,
    index: BTreeMap<(Word<A>, B), usize>,
}

impl<A: Ord + Clone, B: Ord + Clone> HomSpace<A, B> {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn position(&self, w: &Word<A>, m: &B) -> Option<usize> {
        self.index.get(&(w.clone(), m.clone())).copied()
    }

    pub fn vector(&self, r: &Coderivation<A, B>, ring: &Ring) -> Result<Vec<Scalar>> {
        let mut v = vec![ring.zero(); self.len()];
        for (w, lin) in &r.comps {
            for (m, c) in lin {
                let i = self
                    .position(w, m)
                    .ok_or_else(|| Error::Budget("component outside the truncated hom".into()))?;
                v[i] = c.clone();
            }
        }
        Ok(v)
    }

    pub fn coderivation(&self, v: &[Scalar]) -> Coderivation<A, B> {
        let mut r = Coderivation::zero();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let (w, m) = &self.slots[i];
                r.comps.entry(w.clone()).or_default().add_term(m.clone(), c.clone());
            }
        }
        r
    }

    pub fn basis_element(&self, i: usize, ring: &Ring) -> Coderivation<A, B> {
        let (w, m) = &self.slots[i];
        let mut r = Coderivation::zero();
        r.comps.insert(w.clone(), Lin::single(m.clone(), ring.one()));
        r
    }
}

/// The functor category on an explicit list of functors, with coderivation
/// components on source words of length ≤ `max_len` and weight ≤
/// `max_weight`, and target basis morphisms of weight ≤ `target_weight`.
pub struct FunctorCategory<'a, S: Category, T: Category> {
    pub src: &'a S,
    pub tgt: &'a T,
    pub functors: Vec<CocatHom<S::Mor, T::Mor>>,
    pub max_len: usize,
    pub max_weight: usize,
    pub target_weight: usize,
    words: Vec<Word<S::Mor>>,
}

impl<'a, S: Category, T: Category> FunctorCategory<'a, S, T> {
    /// Builds the category after checking every listed functor on words of
    /// length ≤ `max_len`.
    pub fn new(
        src: &'a S,
        tgt: &'a T,
        functors: Vec<CocatHom<S::Mor, T::Mor>>,
        max_len: usize,
        max_weight: usize,
        target_weight: usize,
    ) -> Result<Self> {
        if let Some(l) = tgt.level() {
            if l < max_len + 1 {
                return Err(Error::Budget(format!(
                    "target of level {l} cannot support coderivations of length {max_len}"
                )));
            }
        }
        for (i, f) in functors.iter().enumerate() {
            let report = check_an_functor(src, tgt, f, max_len.max(1), max_weight)?;
            if let Some((k, c)) = report.first_failure() {
                return Err(Error::Precondition(format!(
                    "object {i} fails the functor equation at k={k} on {}",
                    c.input
                )));
            }
        }
        let words = enumerate_words(src, None, max_len, max_weight);
        Ok(FunctorCategory { src, tgt, functors, max_len, max_weight, target_weight, words })
    }

    pub fn ring(&self) -> &Ring {
        self.src.ring()
    }

    pub fn words(&self) -> &[Word<S::Mor>] {
        &self.words
    }

    pub fn functor(&self, i: usize) -> &CocatHom<S::Mor, T::Mor> {
        &self.functors[i]
    }

    pub fn b1(&self, f: usize, g: usize, r: &Coderivation<S::Mor, T::Mor>) -> Result<Coderivation<S::Mor, T::Mor>> {
        b1(self.src, self.tgt, &self.functors[f], &self.functors[g], r, &self.words)
    }

    /// `B_n` along the chain of functor indices `chain` (length `n + 1`).
    pub fn bn(&self, chain: &[usize], rs: &[&Coderivation<S::Mor, T::Mor>]) -> Result<Coderivation<S::Mor, T::Mor>> {
        let fs: Vec<&CocatHom<S::Mor, T::Mor>> = chain.iter().map(|&i| &self.functors[i]).collect();
        bn(self.src, self.tgt, &fs, rs, &self.words)
    }

    pub fn hom_space(&self, f: usize, g: usize) -> HomSpace<S::Mor, T::Mor> {
        let (ff, gg) = (&self.functors[f], &self.functors[g]);
        let mut slots = Vec::new();
        let mut degrees = Vec::new();
        for w in &self.words {
            let end: ObjId = w.end(self.src).expect("enumerated words are composable");
            let wd = w.degree(self.src);
            for m in self.tgt.hom_basis(ff.obj_map[w.start], gg.obj_map[end], self.target_weight) {
                degrees.push(self.tgt.degree(&m) - wd);
                slots.push((w.clone(), m));
            }
        }
        let index = slots.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        HomSpace { f, g, slots, degrees, index }
    }

    /// Matrix of `B_1` on the slot basis of `hom(f, g)` (rows are inputs).
    pub fn b1_matrix(&self, hom: &HomSpace<S::Mor, T::Mor>) -> Result<SparseMatrix> {
        let ring = self.ring().clone();
        let rows: Vec<Vec<Scalar>> = (0..hom.len())
            .into_par_iter()
            .map(|i| {
                let img = self.b1(hom.f, hom.g, &hom.basis_element(i, &ring))?;
                hom.vector(&img, &ring)
            })
            .collect::<Result<_>>()?;
        let mut m = SparseMatrix::zero(ring, hom.len(), hom.len());
        for (i, row) in rows.into_iter().enumerate() {
            for (j, c) in row.into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(i, j, c);
                }
            }
        }
        Ok(m)
    }

    fn slot_coder(&self, s: &Slot<S::Mor, T::Mor>) -> Coderivation<S::Mor, T::Mor> {
        let mut r = Coderivation::zero();
        r.comps.insert(s.word.clone(), Lin::single(s.out.clone(), self.ring().one()));
        r
    }
}

impl<S: Category, T: Category> Category for FunctorCategory<'_, S, T> {
    type Mor = Slot<S::Mor, T::Mor>;

    fn ring(&self) -> &Ring {
        self.src.ring()
    }
    fn object_count(&self) -> usize {
        self.functors.len()
    }
    fn object_name(&self, x: ObjId) -> String {
        format!("f{x}")
    }
    fn source(&self, m: &Self::Mor) -> ObjId {
        m.f
    }
    fn target(&self, m: &Self::Mor) -> ObjId {
        m.g
    }
    fn degree(&self, m: &Self::Mor) -> i64 {
        self.tgt.degree(&m.out) - m.word.degree(self.src)
    }
    fn b(&self, xs: &[Self::Mor]) -> Result<Lin<Self::Mor>> {
        let mut chain = vec![xs[0].f];
        for (i, x) in xs.iter().enumerate() {
            if x.f != chain[i] {
                return Err(Error::EndpointMismatch("slots are not composable".into()));
            }
            chain.push(x.g);
        }
        let coders: Vec<Coderivation<S::Mor, T::Mor>> = xs.iter().map(|s| self.slot_coder(s)).collect();
        let refs: Vec<&Coderivation<S::Mor, T::Mor>> = coders.iter().collect();
        let out = self.bn(&chain, &refs)?;
        let (f, g) = (chain[0], *chain.last().unwrap());
        let mut lin = Lin::zero();
        for (w, v) in out.comps {
            for (m, c) in &v {
                lin.add_term(Slot { f, g, word: w.clone(), out: m.clone() }, c.clone());
            }
        }
        Ok(lin)
    }
    fn level(&self) -> Option<usize> {
        None
    }
    fn hom_basis(&self, x: ObjId, y: ObjId, _max_weight: usize) -> Vec<Self::Mor> {
        self.hom_space(x, y)
            .slots
            .into_iter()
            .map(|(word, out)| Slot { f: x, g: y, word, out })
            .collect()
    }
    fn display(&self, m: &Self::Mor) -> String {
        let ws: Vec<String> = m.word.mors.iter().map(|x| self.src.display(x)).collect();
        format!("f{}→f{}[{} ↦ {}]", m.f, m.g, ws.join(" ⊗ "), self.tgt.display(&m.out))
    }
}

/// Outcome of checking that `(r_0 ⊗ p_0) B_2 − 𝐢_0` and `(p_0 ⊗ r_0) B_2 − 𝐢_0`
/// are `B_1`-boundaries, with witnesses `w` satisfying `w B_1 = difference`.
#[derive(Clone, Debug, Serialize)]
pub struct UnitCycleReport {
    pub left_difference_terms: usize,
    pub right_difference_terms: usize,
    pub left_witness: Option<Vec<String>>,
    pub right_witness: Option<Vec<String>>,
    pub left_witness_terms: usize,
    pub right_witness_terms: usize,
}

impl UnitCycleReport {
    pub fn passed(&self) -> bool {
        self.left_witness.is_some() && self.right_witness.is_some()
    }
}

/// Checks the unit-cycle conditions in `hom(φ, φ)` of a functor category.
pub fn unit_cycle_check<S: Category, T: Category>(
    fc: &FunctorCategory<'_, S, T>,
    phi: usize,
    r0: &Coderivation<S::Mor, T::Mor>,
    p0: &Coderivation<S::Mor, T::Mor>,
    i0: &Coderivation<S::Mor, T::Mor>,
) -> Result<UnitCycleReport> {
    let ring = fc.ring().clone();
    for (name, x) in [("r0", r0), ("p0", p0)] {
        if !fc.b1(phi, phi, x)?.is_zero() {
            return Err(Error::Precondition(format!("{name} is not a B_1-cycle")));
        }
    }
    let hom = fc.hom_space(phi, phi);
    let d = fc.b1_matrix(&hom)?;
    let mut out = Vec::new();
    for (a, b) in [(r0, p0), (p0, r0)] {
        let diff = fc.bn(&[phi, phi, phi], &[a, b])?.minus(i0, &ring);
        let v = hom.vector(&diff, &ring)?;
        let witness = image_membership(&d, &v)?;
        let witness = match witness {
            Some(x) => {
                let w = hom.coderivation(&x);
                if fc.b1(phi, phi, &w)? != diff {
                    return Err(Error::Precondition("witness does not reproduce the difference".into()));
                }
                Some(w)
            }
            None => None,
        };
        out.push((diff, witness));
    }
    let describe = |w: &Coderivation<S::Mor, T::Mor>| -> Vec<String> {
        let mut lines = Vec::new();
        for (word, v) in &w.comps {
            let ws: Vec<String> = word.mors.iter().map(|x| fc.src.display(x)).collect();
            for (m, c) in v {
                lines.push(format!("{c}·[{}: {} ↦ {}]", fc.src.object_name(word.start), ws.join(" ⊗ "), fc.tgt.display(m)));
            }
        }
        lines
    };
    let terms = |w: &Coderivation<S::Mor, T::Mor>| w.comps.values().map(Lin::len).sum::<usize>();
    let (right, left) = (out.pop().unwrap(), out.pop().unwrap());
    Ok(UnitCycleReport {
        left_difference_terms: terms(&left.0),
        right_difference_terms: terms(&right.0),
        left_witness_terms: left.1.as_ref().map_or(0, terms),
        right_witness_terms: right.1.as_ref().map_or(0, terms),
        left_witness: left.1.as_ref().map(describe),
        right_witness: right.1.as_ref().map(describe),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::{check_an_category, AnCategory};
    use crate::quiver::{DGQuiver, GenId, Generator, GradedMap, GradedQuiver};
    use crate::scalars::mat_mul;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// One object, generators x (degree −1) and y (degree 0), optionally with d x = y.
    fn quiver(with_d: bool) -> DGQuiver {
        let z = Ring::Integers;
        let q = GradedQuiver::new(
            z.clone(),
            vec!["X".into()],
            vec![
                Generator { name: "x".into(), src: 0, dst: 0, sdeg: -1 },
                Generator { name: "y".into(), src: 0, dst: 0, sdeg: 0 },
            ],
        )
        .unwrap();
        let mut d = GradedMap::new(1);
        if with_d {
            d.images.insert(0, Lin::single(1, z.one()));
        }
        DGQuiver::new(q, d).unwrap()
    }

    fn random_of_degree(toy: &AnCategory, deg: i64, rng: &mut ChaCha8Rng) -> Lin<usize> {
        (0..toy.mors.len())
            .filter(|&m| toy.mors[m].sdeg == deg)
            .map(|m| (m, toy.ring.from_i64(rng.gen_range(-2..=2))))
            .collect()
    }

    /// A random chain map from the quiver into the toy.
    fn chain_map(q: &DGQuiver, toy: &AnCategory, rng: &mut ChaCha8Rng) -> CocatHom<GenId, usize> {
        let mut f = CocatHom::new(vec![0]);
        if q.d.images.contains_key(&0) {
            let u = random_of_degree(toy, -1, rng);
            f.set(vec![1], toy.b1_lin(&u).unwrap()).unwrap();
            f.set(vec![0], u).unwrap();
        } else {
            let mut x = toy.b1_lin(&random_of_degree(toy, -2, rng)).unwrap();
            x.add_scaled(toy.unit(0).unwrap(), &toy.ring.from_i64(rng.gen_range(-2..=2)));
            f.set(vec![0], x).unwrap();
            f.set(vec![1], toy.b1_lin(&random_of_degree(toy, -1, rng)).unwrap()).unwrap();
        }
        f
    }

    fn random_coder(
        fc: &FunctorCategory<'_, DGQuiver, AnCategory>,
        f: usize,
        g: usize,
        rng: &mut ChaCha8Rng,
    ) -> Coderivation<GenId, usize> {
        let hom = fc.hom_space(f, g);
        let v: Vec<Scalar> = (0..hom.len()).map(|_| fc.ring().from_i64(rng.gen_range(-2..=2))).collect();
        hom.coderivation(&v)
    }

    #[test]
    fn a1_differential_matches_closed_form() {
        let z = Ring::Integers;
        let toy = AnCategory::matrix_toy(z.clone()).unwrap();
        let q = quiver(true);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let phi = chain_map(&q, &toy, &mut rng);
        let psi = chain_map(&q, &toy, &mut rng);
        let fc = FunctorCategory::new(&q, &toy, vec![phi.clone(), psi.clone()], 1, 1, 1).unwrap();
        for _ in 0..5 {
            let r = random_coder(&fc, 0, 1, &mut rng);
            let rb = fc.b1(0, 1, &r).unwrap();
            let e = Word::empty(0);
            let r0 = r.component(&e).cloned().unwrap_or_default();
            // (rB_1)_0 = r_0 b_1.
            assert_eq!(rb.component(&e).cloned().unwrap_or_default(), toy.b1_lin(&r0).unwrap());
            for x in 0..2usize {
                let w = Word { start: 0, mors: vec![x] };
                let dx = q.degree(&x);
                let r1 = r.component(&w).cloned().unwrap_or_default();
                let mut expect = toy.b1_lin(&r1).unwrap();
                let phi1 = phi.component(&[x]).cloned().unwrap_or_default();
                let psi1 = psi.component(&[x]).cloned().unwrap_or_default();
                for (a, ca) in &phi1 {
                    for (b, cb) in &r0 {
                        expect.add_scaled(&toy.b(&[*a, *b]).unwrap(), &(ca * cb));
                    }
                }
                for (a, ca) in &r0 {
                    let deg_r = toy.degree(a);
                    for (b, cb) in &psi1 {
                        let s = z.sign(deg_r * dx);
                        expect.add_scaled(&toy.b(&[*a, *b]).unwrap(), &(&(ca * cb) * &s));
                    }
                }
                // −(−1)^r b_1 r_1, per homogeneous piece of r_1.
                let dxw = q.d.apply(&x);
                for (y, c) in &dxw {
                    let wy = Word { start: 0, mors: vec![*y] };
                    for (m, e2) in r.component(&wy).cloned().unwrap_or_default().iter() {
                        let s = z.sign(1 + toy.degree(m) - q.degree(y));
                        expect.add_term(*m, &(c * e2) * &s);
                    }
                }
                assert_eq!(rb.component(&w).cloned().unwrap_or_default(), expect);
            }
        }
    }

    #[test]
    fn b1_squares_to_zero_and_zero_maps_to_zero() {
        let z = Ring::Integers;
        let toy = AnCategory::matrix_toy(z.clone()).unwrap();
        for with_d in [false, true] {
            let q = quiver(with_d);
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            let fs = vec![chain_map(&q, &toy, &mut rng), chain_map(&q, &toy, &mut rng)];
            let fc = FunctorCategory::new(&q, &toy, fs, 1, 1, 1).unwrap();
            assert!(fc.b1(0, 1, &Coderivation::zero()).unwrap().is_zero());
            let hom = fc.hom_space(0, 1);
            let d = fc.b1_matrix(&hom).unwrap();
            assert!(mat_mul(&d, &d).unwrap().is_zero());
        }
        // Toy to toy with the identity functor, words up to length 2.
        let id = CocatHom::identity(1, 0..toy.mors.len(), &z);
        let fc = FunctorCategory::new(&toy, &toy, vec![id], 2, 2, 1).unwrap();
        let hom = fc.hom_space(0, 0);
        let d = fc.b1_matrix(&hom).unwrap();
        assert!(mat_mul(&d, &d).unwrap().is_zero());
    }

    #[test]
    fn composition_is_coherent_over_the_toy() {
        let z = Ring::Integers;
        let toy = AnCategory::matrix_toy(z.clone()).unwrap();
        let id = CocatHom::identity(1, 0..toy.mors.len(), &z);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a_words = enumerate_words(&toy, None, 3, 3);
        let b_words = enumerate_words(&toy, None, 5, 5);
        for (dr, dt) in [(-1, 0), (0, -1), (-2, 1)] {
            let rs: Vec<_> = (0..2)
                .map(|i| crate::random::coderivation(&mut rng, &toy, &toy, &[0], &[0], &a_words, dr + i, 0.7).unwrap())
                .collect();
            let t = crate::random::coderivation(&mut rng, &toy, &toy, &[0], &[0], &a_words, dt, 0.7).unwrap();
            for n in 0..=2 {
                let fr = vec![&id; n + 1];
                let rr: Vec<&Coderivation<usize, usize>> = rs[..n].iter().collect();
                for tail in [None, Some(&t)] {
                    if n == 0 && tail.is_none() {
                        continue;
                    }
                    let gs = if tail.is_some() { vec![&id, &id] } else { vec![&id] };
                    let (lhs, rhs) = coherence_sides(&toy, &toy, &toy, &fr, &rr, &gs, tail, &a_words, &b_words).unwrap();
                    assert_eq!(lhs, rhs, "n = {n}, m = {}", usize::from(tail.is_some()));
                    assert!(!rhs.is_zero());
                }
            }
        }
    }

    #[test]
    fn b_is_composition_with_the_differential() {
        let z = Ring::Integers;
        let toy = AnCategory::matrix_toy(z.clone()).unwrap();
        let id = CocatHom::identity(1, 0..toy.mors.len(), &z);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let words = enumerate_words(&toy, None, 3, 3);
        let long = enumerate_words(&toy, None, 6, 6);
        // b of the target as a coderivation id → id of degree 1.
        let mut bt = Coderivation::zero();
        for u in &long {
            bt.add_at(u.clone(), &b_word(&toy, u).unwrap(), &z.one());
        }
        let rs: Vec<_> = (0..3)
            .map(|i| crate::random::coderivation(&mut rng, &toy, &toy, &[0], &[0], &words, i - 1, 0.7).unwrap())
            .collect();
        for n in 1..=3 {
            let fs = vec![&id; n + 1];
            let rr: Vec<&Coderivation<usize, usize>> = rs[..n].iter().collect();
            let lhs = bn(&toy, &toy, &fs, &rr, &words).unwrap();
            let mut rhs = m_n1(&toy, &toy, &toy, &fs, &rr, &bt, &words).unwrap();
            if n == 1 {
                // (b ⊠ 1) M = (−1)^{deg r} b r with b acting on the source.
                let r = rr[0];
                for w in &words {
                    for (w2, c) in &b_in_blocks(&toy, w).unwrap() {
                        if let Some(v) = r.component(w2) {
                            let d = v.basis().next().map(|m| toy.degree(m) - w2.degree(&toy)).unwrap_or(0);
                            rhs.add_at(w.clone(), v, &(c * &z.sign(1 + d)));
                        }
                    }
                }
            }
            assert_eq!(lhs, rhs, "n = {n}");
            // The toy has no b_3.
            assert_eq!(lhs.is_zero(), n == 3);
        }
    }

    #[test]
    fn a1_functor_category_is_a_infinity() {
        let z = Ring::Integers;
        let toy = AnCategory::matrix_toy(z).unwrap();
        let q = quiver(true);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fs = vec![chain_map(&q, &toy, &mut rng), chain_map(&q, &toy, &mut rng)];
        let fc = FunctorCategory::new(&q, &toy, fs, 1, 1, 1).unwrap();
        let report = check_an_category(&fc, 3, 3).unwrap();
        assert!(report.passed(), "{report}");
        let empty: FunctorCategory<'_, DGQuiver, AnCategory> =
            FunctorCategory::new(&q, &toy, vec![], 1, 1, 1).unwrap();
        assert!(check_an_category(&empty, 3, 3).unwrap().passed());
    }

    #[test]
    fn zero_degree_compositions_vanish_for_long_tails() {
        let z = Ring::Integers;
        let toy = AnCategory::matrix_toy(z.clone()).unwrap();
        let id = CocatHom::identity(1, 0..toy.mors.len(), &z);
        let fc = FunctorCategory::new(&toy, &toy, vec![id.clone()], 2, 2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let hom = fc.hom_space(0, 0);
        let v: Vec<Scalar> = (0..hom.len()).map(|_| z.from_i64(rng.gen_range(-1..=1))).collect();
        let r = hom.coderivation(&v);
        let out = m_compose(&toy, &toy, &toy, &[&id, &id], &[&r], Tail::Coders(vec![&r, &r]), fc.words()).unwrap();
        assert!(out.is_zero());
        let out = m_compose(&toy, &toy, &toy, &[&id], &[], Tail::Functor(&id), fc.words()).unwrap();
        assert!(out.is_zero());
        // (r | id) M_10 = r.
        let out = m_compose(&toy, &toy, &toy, &[&id, &id], &[&r], Tail::Functor(&id), fc.words()).unwrap();
        assert_eq!(out, r);
    }

    #[test]
    fn unit_cycles_of_the_toy() {
        let z = Ring::Integers;
        let toy = AnCategory::matrix_toy(z.clone()).unwrap();
        let q = quiver(false);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let phi = chain_map(&q, &toy, &mut rng);
        let fc = FunctorCategory::new(&q, &toy, vec![phi], 1, 1, 1).unwrap();
        let mut unit = Coderivation::zero();
        unit.comps.insert(Word::empty(0), toy.unit(0).unwrap().clone());
        // (𝐢 ⊗ 𝐢) B_2 = 𝐢 exactly.
        assert_eq!(fc.bn(&[0, 0, 0], &[&unit, &unit]).unwrap(), unit);
        let report = unit_cycle_check(&fc, 0, &unit, &unit, &unit).unwrap();
        assert!(report.passed());
        assert_eq!(report.left_difference_terms, 0);
        // A boundary perturbation needs a nonzero witness.
        let hom = fc.hom_space(0, 0);
        let mut found = false;
        for i in 0..hom.len() {
            if hom.degrees[i] != -2 {
                continue;
            }
            let zb = fc.b1(0, 0, &hom.basis_element(i, &z)).unwrap();
            if zb.is_zero() {
                continue;
            }
            let mut r0 = unit.clone();
            r0.add_scaled(&zb, &z.one());
            let report = unit_cycle_check(&fc, 0, &r0, &unit, &unit).unwrap();
            assert!(report.passed());
            assert!(report.left_difference_terms > 0);
            assert!(report.left_witness_terms > 0);
            found = true;
        }
        assert!(found);
        // A non-cycle is rejected.
        let j = (0..hom.len()).find(|&j| !fc.b1(0, 0, &hom.basis_element(j, &z)).unwrap().is_zero()).unwrap();
        let bad = hom.basis_element(j, &z);
        assert!(matches!(unit_cycle_check(&fc, 0, &bad, &unit, &unit), Err(Error::Precondition(_))));
    }
}
