//! A_N-categories given by finite tables, verification of the A_N identities
//! for categories and functors, and functor categories.

mod functor_cat;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{enumerate_words, suspension_sign, Category, DGQuiver, Generator, ObjId, Word};
use crate::scalars::{Lin, Ring};
use crate::tensor::{theta, CocatHom};

pub use functor_cat::{
    b1, b1_at, bn, bn_at, coherence_sides, m_compose, m_n0, m_n1, unit_cycle_check, FunctorCategory, HomSpace, Slot, Tail, UnitCycleReport,
};

/// Unit elements `_X𝐢_0` (shifted degree −1) and an optional first
/// component `𝐢_1` of the unit transformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitData {
    pub i0: Vec<Lin<usize>>,
    pub i1: BTreeMap<usize, Lin<usize>>,
}

/// An A_N-category with finitely many basis morphisms; `ops` stores `b_n` on
/// composable words of basis morphisms (absent entries are zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnCategory {
    pub ring: Ring,
    pub objects: Vec<String>,
    pub mors: Vec<Generator>,
    pub ops: BTreeMap<Vec<usize>, Lin<usize>>,
    pub level: Option<usize>,
    pub units: Option<UnitData>,
}

impl AnCategory {
    pub fn new(
        ring: Ring,
        objects: Vec<String>,
        mors: Vec<Generator>,
        ops: BTreeMap<Vec<usize>, Lin<usize>>,
        level: Option<usize>,
    ) -> Result<Self> {
        let quiver = crate::quiver::GradedQuiver::new(ring.clone(), objects, mors)?;
        let cat = AnCategory { ring, objects: quiver.objects, mors: quiver.gens, ops, level, units: None };
        for (word, value) in &cat.ops {
            if word.is_empty() {
                return Err(Error::Precondition("b_0 must vanish".into()));
            }
            if let Some(n) = level {
                if word.len() > n {
                    return Err(Error::Budget(format!("b_{} above level {n}", word.len())));
                }
            }
            if word.iter().any(|&m| m >= cat.mors.len()) {
                return Err(Error::UnknownName(format!("morphism index in {word:?}")));
            }
            let w = Word { start: cat.source(&word[0]), mors: word.clone() };
            let end = w.end(&cat)?;
            let deg = w.degree(&cat) + 1;
            for (m, _) in value {
                if cat.source(m) != w.start || cat.target(m) != end {
                    return Err(Error::EndpointMismatch(format!("b on {word:?} leaves the hom")));
                }
                if cat.degree(m) != deg {
                    return Err(Error::Inhomogeneous(format!("b on {word:?} is not of degree 1")));
                }
            }
        }
        Ok(cat)
    }

    /// Attaches unit elements after checking degrees and `𝐢_0 b_1 = 0`.
    pub fn with_units(mut self, units: UnitData) -> Result<Self> {
        if units.i0.len() != self.objects.len() {
            return Err(Error::MissingUnits(format!(
                "{} unit elements for {} objects",
                units.i0.len(),
                self.objects.len()
            )));
        }
        for (x, u) in units.i0.iter().enumerate() {
            if u.is_zero() {
                return Err(Error::MissingUnits(format!("zero unit at {}", self.objects[x])));
            }
            for (m, _) in u {
                if self.source(m) != x || self.target(m) != x || self.degree(m) != -1 {
                    return Err(Error::MissingUnits(format!(
                        "unit at {} must be a degree −1 endomorphism",
                        self.objects[x]
                    )));
                }
            }
            if !self.b1_lin(u)?.is_zero() {
                return Err(Error::NotAComplex(format!("unit at {} is not a cycle", self.objects[x])));
            }
        }
        self.units = Some(units);
        Ok(self)
    }

    pub fn b1_lin(&self, x: &Lin<usize>) -> Result<Lin<usize>> {
        let mut out = Lin::zero();
        for (m, c) in x {
            out.add_scaled(&self.b(std::slice::from_ref(m))?, c);
        }
        Ok(out)
    }

    pub fn mor_id(&self, name: &str) -> Result<usize> {
        self.mors
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownName(format!("morphism {name:?}")))
    }

    /// Forgets the operations above level `n`.
    pub fn restrict_level(&self, n: usize) -> AnCategory {
        AnCategory {
            ring: self.ring.clone(),
            objects: self.objects.clone(),
            mors: self.mors.clone(),
            ops: self.ops.iter().filter(|(w, _)| w.len() <= n).map(|(w, v)| (w.clone(), v.clone())).collect(),
            level: Some(self.level.map_or(n, |l| l.min(n))),
            units: self.units.clone(),
        }
    }

    /// A DG quiver as an A_1-category with `b_1 = d`.
    pub fn from_dg_quiver(q: &DGQuiver) -> AnCategory {
        let ops = q.d.images.iter().map(|(g, v)| (vec![*g], v.clone())).collect();
        AnCategory {
            ring: q.ring().clone(),
            objects: q.quiver.objects.clone(),
            mors: q.quiver.gens.clone(),
            ops,
            level: Some(1),
            units: None,
        }
    }

    /// The DG category whose objects are the given bounded complexes of free
    /// modules and whose morphisms are all graded maps between them.
    ///
    /// Each complex is `(name, degrees of basis vectors, differential entries
    /// (i, j, c) meaning e_i ↦ c·e_j)`.  Basis morphisms `E_ij: e_i ↦ e_j`
    /// compose diagrammatically; the differential is `φ ↦ (−1)^{|φ|} dφ − φd`
    /// and `b_2` carries the suspension sign.  Strict units are the identity
    /// matrices.
    pub fn from_complexes(ring: Ring, complexes: &[(String, Vec<i64>, Vec<(usize, usize, i64)>)]) -> Result<Self> {
        let mut mors = Vec::new();
        let mut index = BTreeMap::new();
        let mut unshifted = Vec::new();
        for (x, (xn, xdeg, _)) in complexes.iter().enumerate() {
            for (y, (yn, ydeg, _)) in complexes.iter().enumerate() {
                for (i, di) in xdeg.iter().enumerate() {
                    for (j, dj) in ydeg.iter().enumerate() {
                        index.insert((x, y, i, j), mors.len());
                        unshifted.push(dj - di);
                        mors.push(Generator {
                            name: format!("{xn}{i}>{yn}{j}"),
                            src: x,
                            dst: y,
                            sdeg: dj - di - 1,
                        });
                    }
                }
            }
        }
        let mut d_of = Vec::new();
        for (name, degs, entries) in complexes {
            let mut d: BTreeMap<(usize, usize), i64> = BTreeMap::new();
            for &(i, j, c) in entries {
                if i >= degs.len() || j >= degs.len() || degs[j] != degs[i] + 1 {
                    return Err(Error::Inhomogeneous(format!("differential entry ({i},{j}) of {name}")));
                }
                *d.entry((i, j)).or_default() += c;
            }
            let mut sq: BTreeMap<(usize, usize), i64> = BTreeMap::new();
            for (&(i, j), &c) in &d {
                for (&(_, k), &e) in d.range((j, 0)..=(j, usize::MAX)) {
                    *sq.entry((i, k)).or_default() += c * e;
                }
            }
            if let Some(((i, k), _)) = sq.iter().find(|(_, &v)| !ring.from_i64(v).is_zero()) {
                return Err(Error::NotAComplex(format!("{name}: d² sends e_{i} to a multiple of e_{k}")));
            }
            d_of.push(d);
        }
        let keys: Vec<(usize, usize, usize, usize)> = index.keys().copied().collect();
        let mut ops = BTreeMap::new();
        for &(x, y, i, j) in &keys {
            let m = index[&(x, y, i, j)];
            let deg = unshifted[m];
            let mut v = Lin::zero();
            // (−1)^{|φ|} d_X φ: e_k ↦ c e_i, then E_ij.
            for (&(k, i2), &c) in &d_of[x] {
                if i2 == i {
                    v.add_term(index[&(x, y, k, j)], ring.from_i64(c).signed(deg));
                }
            }
            // −φ d_Y.
            for (&(j2, l), &c) in &d_of[y] {
                if j2 == j {
                    v.add_term(index[&(x, y, i, l)], -ring.from_i64(c));
                }
            }
            if !v.is_zero() {
                ops.insert(vec![m], v);
            }
        }
        for &(x, y, i, j) in &keys {
            for &(y2, z, k, l) in &keys {
                if y2 != y || k != j {
                    continue;
                }
                let (a, b) = (index[&(x, y, i, j)], index[&(y, z, k, l)]);
                let s = suspension_sign(&[unshifted[a], unshifted[b]]);
                ops.insert(vec![a, b], Lin::single(index[&(x, z, i, l)], ring.sign(s)));
            }
        }
        let objects = complexes.iter().map(|c| c.0.clone()).collect();
        let cat = AnCategory::new(ring.clone(), objects, mors, ops, None)?;
        let i0 = complexes
            .iter()
            .enumerate()
            .map(|(x, (_, degs, _))| (0..degs.len()).map(|i| (index[&(x, x, i, i)], ring.one())).collect())
            .collect();
        cat.with_units(UnitData { i0, i1: BTreeMap::new() })
    }

    /// The strictly unital DG toy: one object, the endomorphisms of the
    /// contractible complex `k e_0 → k e_1`.
    pub fn matrix_toy(ring: Ring) -> Result<Self> {
        AnCategory::from_complexes(ring, &[("C".into(), vec![0, 1], vec![(0, 1, 1)])])
    }

    /// The units as a map from each object to its unit element.
    pub fn unit(&self, x: ObjId) -> Result<&Lin<usize>> {
        self.units
            .as_ref()
            .and_then(|u| u.i0.get(x))
            .ok_or_else(|| Error::MissingUnits(format!("no unit at object {x}")))
    }
}

impl Category for AnCategory {
    type Mor = usize;

    fn ring(&self) -> &Ring {
        &self.ring
    }
    fn object_count(&self) -> usize {
        self.objects.len()
    }
    fn object_name(&self, x: ObjId) -> String {
        self.objects[x].clone()
    }
    fn source(&self, m: &usize) -> ObjId {
        self.mors[*m].src
    }
    fn target(&self, m: &usize) -> ObjId {
        self.mors[*m].dst
    }
    fn degree(&self, m: &usize) -> i64 {
        self.mors[*m].sdeg
    }
    fn b(&self, xs: &[usize]) -> Result<Lin<usize>> {
        if let Some(n) = self.level {
            if xs.len() > n {
                return Err(Error::Budget(format!("b_{} requested from an A_{n}-category", xs.len())));
            }
        }
        Ok(self.ops.get(xs).cloned().unwrap_or_default())
    }
    fn level(&self) -> Option<usize> {
        self.level
    }
    fn hom_basis(&self, x: ObjId, y: ObjId, max_weight: usize) -> Vec<usize> {
        if max_weight == 0 {
            return Vec::new();
        }
        (0..self.mors.len()).filter(|&m| self.mors[m].src == x && self.mors[m].dst == y).collect()
    }
    fn display(&self, m: &usize) -> String {
        self.mors[*m].name.clone()
    }
}

/// `b_n` on a word, zero for the empty word.
pub fn b_word<C: Category>(cat: &C, u: &Word<C::Mor>) -> Result<Lin<C::Mor>> {
    if u.is_empty() {
        Ok(Lin::zero())
    } else {
        cat.b(&u.mors)
    }
}

/// `Σ (1^{⊗α} ⊗ b_n ⊗ 1^{⊗β})` applied to `w` over all nonempty blocks, each
/// with the sign `(−1)^{deg(factors after the block)}`.
pub fn b_in_blocks<C: Category>(cat: &C, w: &Word<C::Mor>) -> Result<Lin<Word<C::Mor>>> {
    let n = w.len();
    let mut suffix = vec![0i64; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + cat.degree(&w.mors[i]);
    }
    let mut out = Lin::zero();
    for i in 0..n {
        for j in i + 1..=n {
            if cat.level().is_some_and(|l| j - i > l) {
                break;
            }
            let v = cat.b(&w.mors[i..j])?;
            let s = cat.ring().sign(suffix[j]);
            for (m, c) in &v {
                let mut mors = w.mors[..i].to_vec();
                mors.push(m.clone());
                mors.extend_from_slice(&w.mors[j..]);
                out.add_term(Word { start: w.start, mors }, c * &s);
            }
        }
    }
    Ok(out)
}

/// First counterexample of an identity: the input and both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelResult {
    pub k: usize,
    pub instances: usize,
    pub counterexample: Option<Counterexample>,
}

/// Result of checking one family of identities level by level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub family: String,
    pub levels: Vec<LevelResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(|l| l.counterexample.is_none())
    }

    pub fn instances(&self) -> usize {
        self.levels.iter().map(|l| l.instances).sum()
    }

    pub fn first_failure(&self) -> Option<(usize, &Counterexample)> {
        self.levels.iter().find_map(|l| l.counterexample.as_ref().map(|c| (l.k, c)))
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.levels {
            match &l.counterexample {
                None => writeln!(f, "{} k={}: pass ({} instances)", self.family, l.k, l.instances)?,
                Some(c) => writeln!(
                    f,
                    "{} k={}: FAIL ({} instances) at {}: lhs = {}, rhs = {}",
                    self.family, l.k, l.instances, c.input, c.lhs, c.rhs
                )?,
            }
        }
        Ok(())
    }
}

pub fn show_word<C: Category>(cat: &C, w: &Word<C::Mor>) -> String {
    if w.is_empty() {
        return format!("[] at {}", cat.object_name(w.start));
    }
    let parts: Vec<String> = w.mors.iter().map(|m| cat.display(m)).collect();
    format!("[{}]", parts.join(" ⊗ "))
}

pub fn show_lin<B: Ord + Clone>(x: &Lin<B>, show: impl Fn(&B) -> String) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = x.iter().map(|(b, c)| format!("{c}·{}", show(b))).collect();
    parts.join(" + ")
}

/// Runs `check` on every word, grouped by word length, in parallel; keeps the
/// first failure (in word order) per length.
fn scan<M: Clone + Ord + Send + Sync>(
    family: &str,
    words: Vec<Word<M>>,
    max_k: usize,
    check: impl Fn(&Word<M>) -> Result<Option<Counterexample>> + Sync,
) -> Result<CheckReport> {
    let mut levels = Vec::new();
    for k in 1..=max_k {
        let ws: Vec<&Word<M>> = words.iter().filter(|w| w.len() == k).collect();
        let results: Vec<Option<Counterexample>> = ws.par_iter().map(|w| check(w)).collect::<Result<_>>()?;
        levels.push(LevelResult { k, instances: ws.len(), counterexample: results.into_iter().flatten().next() });
    }
    Ok(CheckReport { family: family.into(), levels })
}

/// Verifies `Σ_{r+n+t=k} (1^{⊗r} ⊗ b_n ⊗ 1^{⊗t}) b_{r+1+t} = 0` on every
/// composable word of basis morphisms with length `k ≤ max_k` and total
/// weight ≤ `max_weight`.
pub fn check_an_category<C: Category>(cat: &C, max_k: usize, max_weight: usize) -> Result<CheckReport> {
    let max_k = cat.level().map_or(max_k, |l| l.min(max_k));
    let words = enumerate_words(cat, None, max_k, max_weight);
    scan("b·b = 0", words, max_k, |w| {
        let mut total = Lin::zero();
        for (u, c) in &b_in_blocks(cat, w)? {
            total.add_scaled(&b_word(cat, u)?, c);
        }
        Ok((!total.is_zero()).then(|| Counterexample {
            input: show_word(cat, w),
            lhs: show_lin(&total, |m| cat.display(m)),
            rhs: "0".into(),
        }))
    })
}

/// Verifies the A_N-functor equation
/// `Σ (f_{i_1} ⊗ … ⊗ f_{i_l}) b_l = Σ (1^{⊗r} ⊗ b_n ⊗ 1^{⊗t}) f_{r+1+t}`
/// on every composable source word of length `k ≤ max_k` and weight ≤
/// `max_weight`.
pub fn check_an_functor<S: Category, T: Category>(
    src: &S,
    tgt: &T,
    f: &CocatHom<S::Mor, T::Mor>,
    max_k: usize,
    max_weight: usize,
) -> Result<CheckReport> {
    if f.obj_map.len() != src.object_count() || f.obj_map.iter().any(|&y| y >= tgt.object_count()) {
        return Err(Error::EndpointMismatch("object map does not match the categories".into()));
    }
    let words = enumerate_words(src, None, max_k, max_weight);
    scan("functor equation", words, max_k, |w| {
        let (lhs, rhs) = functor_equation_sides(src, tgt, f, w)?;
        Ok((lhs != rhs).then(|| Counterexample {
            input: show_word(src, w),
            lhs: show_lin(&lhs, |m| tgt.display(m)),
            rhs: show_lin(&rhs, |m| tgt.display(m)),
        }))
    })
}

/// Both sides of the functor equation on one word.
pub fn functor_equation_sides<S: Category, T: Category>(
    src: &S,
    tgt: &T,
    f: &CocatHom<S::Mor, T::Mor>,
    w: &Word<S::Mor>,
) -> Result<(Lin<T::Mor>, Lin<T::Mor>)> {
    let mut lhs = Lin::zero();
    for (u, c) in &theta(src, tgt, &[f], &[], w)? {
        lhs.add_scaled(&b_word(tgt, u)?, c);
    }
    let mut rhs = Lin::zero();
    for (u, c) in &b_in_blocks(src, w)? {
        if let Some(v) = f.component(&u.mors) {
            rhs.add_scaled(v, c);
        }
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{GradedMap, GradedQuiver};

    #[test]
    fn dg_quiver_is_a1() {
        let z = Ring::Integers;
        let quiver = GradedQuiver::new(
            z.clone(),
            vec!["X".into(), "Y".into()],
            vec![
                Generator { name: "a".into(), src: 0, dst: 1, sdeg: -1 },
                Generator { name: "b".into(), src: 0, dst: 1, sdeg: 0 },
            ],
        )
        .unwrap();
        let mut d = GradedMap::new(1);
        d.images.insert(0, Lin::single(1, z.from_i64(3)));
        let q = DGQuiver::new(quiver, d).unwrap();
        assert!(check_an_category(&q, 3, 3).unwrap().passed());
        let a1 = AnCategory::from_dg_quiver(&q);
        let report = check_an_category(&a1, 3, 3).unwrap();
        assert!(report.passed());
        assert_eq!(report.levels.len(), 1);
    }

    #[test]
    fn single_generator_b2() {
        // x of degree −1 with b_2(x, x) = x: the k = 3 identity is
        // (b_2 ⊗ 1) b_2 + (1 ⊗ b_2) b_2 on x⊗x⊗x, i.e. (−1)^{−1} x + x = 0.
        let z = Ring::Integers;
        let mors = vec![Generator { name: "x".into(), src: 0, dst: 0, sdeg: -1 }];
        let mut ops = BTreeMap::new();
        ops.insert(vec![0, 0], Lin::single(0, z.one()));
        let cat = AnCategory::new(z.clone(), vec!["X".into()], mors.clone(), ops, None).unwrap();
        assert!(check_an_category(&cat, 4, 4).unwrap().passed());
        let mut ops = BTreeMap::new();
        ops.insert(vec![0, 0], Lin::single(0, z.one()));
        ops.insert(vec![0], Lin::zero());
        // b_1 of a degree −1 element must land in degree 0: no basis, so b_1 = 0
        // and b_3 cannot be nonzero either; the identity is decided by b_2.
        let cat = AnCategory::new(z, vec!["X".into()], mors, ops, Some(3)).unwrap();
        assert!(check_an_category(&cat, 4, 4).unwrap().passed());
    }

    #[test]
    fn complexes_must_square_to_zero() {
        let bad = ("C".to_string(), vec![0, 1, 2], vec![(0, 1, 1), (1, 2, 1)]);
        assert!(matches!(AnCategory::from_complexes(Ring::Integers, std::slice::from_ref(&bad)), Err(Error::NotAComplex(_))));
        let scaled = ("C".to_string(), vec![0, 1, 2], vec![(0, 1, 2), (1, 2, 3)]);
        assert!(matches!(AnCategory::from_complexes(Ring::Integers, std::slice::from_ref(&scaled)), Err(Error::NotAComplex(_))));
        // 6 = 0 mod 3.
        assert!(AnCategory::from_complexes(Ring::mod_p(3).unwrap(), &[scaled]).is_ok());
    }

    #[test]
    fn matrix_toy_is_strictly_unital_dg() {
        for ring in [Ring::Integers, Ring::Rationals, Ring::mod_p(3).unwrap()] {
            let toy = AnCategory::matrix_toy(ring.clone()).unwrap();
            let report = check_an_category(&toy, 4, 4).unwrap();
            assert!(report.passed(), "{report}");
            let i0 = toy.unit(0).unwrap().clone();
            for m in 0..toy.mors.len() {
                let mut right = Lin::zero();
                let mut left = Lin::zero();
                for (u, c) in &i0 {
                    right.add_scaled(&toy.b(&[m, *u]).unwrap(), c);
                    left.add_scaled(&toy.b(&[*u, m]).unwrap(), c);
                }
                assert_eq!(right, Lin::single(m, ring.one()));
                assert_eq!(left, Lin::single(m, ring.sign(1 + toy.degree(&m))));
            }
        }
        let two = AnCategory::from_complexes(
            Ring::Integers,
            &[("C".into(), vec![0, 1], vec![(0, 1, 2)]), ("K".into(), vec![0], vec![])],
        )
        .unwrap();
        assert!(check_an_category(&two, 4, 4).unwrap().passed());
    }

    #[test]
    fn mutations_are_detected() {
        let z = Ring::Integers;
        let mut toy = AnCategory::matrix_toy(z.clone()).unwrap();
        let key = toy.ops.keys().find(|k| k.len() == 2).unwrap().clone();
        let entry = toy.ops.get(&key).unwrap().clone();
        let (m, _) = entry.iter().next().unwrap();
        let mut bumped = entry.clone();
        bumped.add_term(*m, z.one());
        toy.ops.insert(key, bumped);
        let report = check_an_category(&toy, 3, 3).unwrap();
        assert!(!report.passed());
        assert!(report.first_failure().is_some());
    }

    #[test]
    fn functor_checks() {
        let z = Ring::Integers;
        let toy = AnCategory::matrix_toy(z.clone()).unwrap();
        let id = CocatHom::identity(1, 0..toy.mors.len(), &z);
        assert!(check_an_functor(&toy, &toy, &id, 3, 3).unwrap().passed());
        let mut bad2 = id.clone();
        let (w, v) = toy.ops.iter().find(|(w, _)| w.len() == 2).unwrap();
        let mut perturbed = Lin::zero();
        perturbed.add_term(v.basis().next().copied().unwrap(), z.one());
        bad2.set(w.clone(), perturbed).unwrap();
        let report = check_an_functor(&toy, &toy, &bad2, 3, 3).unwrap();
        assert!(!report.passed());
        assert!(report.first_failure().unwrap().0 <= 3);
    }

    #[test]
    fn restrict_level_keeps_identities() {
        let z = Ring::Integers;
        let toy = AnCategory::matrix_toy(z).unwrap();
        for n in 1..=3 {
            let r = toy.restrict_level(n);
            assert_eq!(r.level, Some(n));
            assert!(check_an_category(&r, 4, 4).unwrap().passed());
        }
    }
}
