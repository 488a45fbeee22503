//! Extending functors from a quiver to its free A_∞-category, lifting chain
//! maps and homotopies into transformation complexes, and the restriction
//! equivalence checks built from them.
//!
//! Every recursion runs over basis morphisms `y` of the free category by
//! increasing leaf count.  A morphism on a tree with `|t| ≥ 1` is `ε·(w) b_k`
//! for the root split `w`, so the defining equation evaluated on `w` with the
//! unknown value at `y` set to zero determines that value.

use rayon::prelude::*;
use serde::Serialize;

use crate::ainfty::{b1, b1_at, b_in_blocks, b_word, check_an_functor, functor_equation_sides, AnCategory, FunctorCategory, HomSpace, UnitCycleReport};
use crate::ainfty::unit_cycle_check;
use crate::error::{Error, Result};
use crate::free::{FreeCategory, FreeMor};
use crate::quiver::{enumerate_words, Category, FiniteComplex, GenId, Word};
use crate::scalars::{mat_mul, Lin, Scalar, SparseMatrix};
use crate::tensor::{theta, CocatHom, Coderivation};
use crate::trees::forest_decomposition;

/// All basis morphisms of the free category on trees with exactly `n` leaves.
fn basis_level(free: &FreeCategory, n: usize) -> Vec<FreeMor> {
    let k = free.object_count();
    let mut out = Vec::new();
    for x in 0..k {
        for y in 0..k {
            out.extend(free.basis_with_leaves(x, y, n));
        }
    }
    out
}

fn split_word(free: &FreeCategory, y: &FreeMor) -> (Word<FreeMor>, Scalar) {
    let (pieces, eps) = free.root_split(y).expect("tree with an internal vertex");
    (Word { start: free.source(y), mors: pieces }, eps)
}

/// Checks that `f_1` commutes with the differentials.
pub fn check_chain_map<T: Category>(q: &crate::quiver::DGQuiver, tgt: &T, f1: &CocatHom<GenId, T::Mor>) -> Result<()> {
    if f1.max_arity() > 1 {
        return Err(Error::Precondition("a chain map has only 1-components".into()));
    }
    let report = check_an_functor(q, tgt, f1, 1, 1)?;
    match report.first_failure() {
        None => Ok(()),
        Some((_, c)) => Err(Error::NotAChainMap(format!("f_1 b_1 ≠ b_1 f_1 on {}", c.input))),
    }
}

/// The unique A_∞-functor `F𝒬 → 𝒜` with the given generator values `f1`
/// and components `higher` (length ≥ 2; absent entries are zero), on all
/// basis morphisms within the leaf budget.
pub fn extend_functor<T: Category>(
    free: &FreeCategory,
    tgt: &T,
    f1: &CocatHom<GenId, T::Mor>,
    higher: &CocatHom<FreeMor, T::Mor>,
) -> Result<CocatHom<FreeMor, T::Mor>> {
    check_chain_map(&free.quiver, tgt, f1)?;
    let mut f = CocatHom::new(f1.obj_map.clone());
    for (w, v) in &higher.comps {
        if w.len() >= 2 {
            f.set(w.clone(), v.clone())?;
        }
    }
    for g in 0..free.quiver.gens().len() {
        if let Some(v) = f1.component(&[g]) {
            f.set(vec![free.generator(g)], v.clone())?;
        }
    }
    for n in 2..=free.leaf_budget {
        let level = basis_level(free, n);
        let values: Vec<Lin<T::Mor>> = level
            .par_iter()
            .map(|y| {
                let (w, eps) = split_word(free, y);
                let (lhs, rhs) = functor_equation_sides(free, tgt, &f, &w)?;
                Ok(lhs.minus(&rhs).scaled(&eps))
            })
            .collect::<Result<_>>()?;
        for (y, v) in level.into_iter().zip(values) {
            f.set(vec![y], v)?;
        }
    }
    Ok(f)
}

/// The strict A_∞-functor extending a chain map.
pub fn extend_strict<T: Category>(
    free: &FreeCategory,
    tgt: &T,
    f1: &CocatHom<GenId, T::Mor>,
) -> Result<CocatHom<FreeMor, T::Mor>> {
    extend_functor(free, tgt, f1, &CocatHom::new(f1.obj_map.clone()))
}

/// The closed form of the strict extension on one basis morphism: drop the
/// shift, apply `f_1` to every generator, then the layers
/// `1^{⊗α} ⊗ b_k ⊗ 1^{⊗β}` of the tree's decomposition.
pub fn strict_f1_explicit<T: Category>(
    free: &FreeCategory,
    tgt: &T,
    f1: &CocatHom<GenId, T::Mor>,
    y: &FreeMor,
) -> Result<Lin<T::Mor>> {
    let ring = tgt.ring().clone();
    let mut acc: Lin<Vec<T::Mor>> = Lin::single(Vec::new(), ring.one());
    for g in &y.gens {
        let image = f1.component(&[*g]).cloned().unwrap_or_default();
        let mut next = Lin::zero();
        for (w, c) in &acc {
            for (m, e) in &image {
                let mut w2 = w.clone();
                w2.push(m.clone());
                next.add_term(w2, c * e);
            }
        }
        acc = next;
    }
    for layer in forest_decomposition(free.tree(y.tree)) {
        let mut next = Lin::zero();
        for (w, c) in &acc {
            let (a, k) = (layer.alpha, layer.k);
            let right: i64 = w[a + k..].iter().map(|m| tgt.degree(m)).sum();
            let s = ring.sign(right);
            for (m, e) in &tgt.b(&w[a..a + k])? {
                let mut w2 = w[..a].to_vec();
                w2.push(m.clone());
                w2.extend_from_slice(&w[a + k..]);
                next.add_term(w2, &(c * e) * &s);
            }
        }
        acc = next;
    }
    Ok(acc
        .into_terms()
        .into_iter()
        .map(|(mut w, c)| {
            debug_assert_eq!(w.len(), 1);
            (w.pop().unwrap(), c)
        })
        .collect())
}

/// `(Ob f, f_1|_𝒬)`.
pub fn restrict_functor<T: Category>(free: &FreeCategory, f: &CocatHom<FreeMor, T::Mor>) -> CocatHom<GenId, T::Mor> {
    let mut out = CocatHom::new(f.obj_map.clone());
    for g in 0..free.quiver.gens().len() {
        if let Some(v) = f.component(&[free.generator(g)]) {
            out.comps.insert(vec![g], v.clone());
        }
    }
    out
}

/// `(r_0, r_1|_𝒬)`.
pub fn restrict_coder<B: Ord + Clone>(free: &FreeCategory, r: &Coderivation<FreeMor, B>) -> Coderivation<GenId, B> {
    let mut out = Coderivation::zero();
    for (w, v) in &r.comps {
        match w.mors.as_slice() {
            [] => {
                out.comps.insert(Word::empty(w.start), v.clone());
            }
            [m] if m.tree == free.leaf_tree() => {
                out.comps.insert(Word { start: w.start, mors: vec![m.gens[0]] }, v.clone());
            }
            _ => {}
        }
    }
    out
}

/// Places A_1-level components `(r_0, r_1)` on the free category's words.
pub fn include_coder<B: Ord + Clone>(free: &FreeCategory, r: &Coderivation<GenId, B>) -> Result<Coderivation<FreeMor, B>> {
    let mut out = Coderivation::zero();
    for (w, v) in &r.comps {
        let mors = match w.mors.as_slice() {
            [] => vec![],
            [g] => vec![free.generator(*g)],
            _ => return Err(Error::Precondition("A_1 data has components of length ≤ 1 only".into())),
        };
        out.comps.insert(Word { start: w.start, mors }, v.clone());
    }
    Ok(out)
}

/// `Σ_j c_j·r^j` for a row `c` of a matrix.
fn combine<A: Ord + Clone, B: Ord + Clone>(row: impl Iterator<Item = (usize, Scalar)>, images: &[Coderivation<A, B>]) -> Coderivation<A, B> {
    let mut out = Coderivation::zero();
    for (j, c) in row {
        out.add_scaled(&images[j], &c);
    }
    out
}

fn row_of(d: &SparseMatrix, i: usize) -> Vec<(usize, Scalar)> {
    d.row(i).map(|(j, c)| (j, c.clone())).collect()
}

/// Data of a chain map `P → sA_∞(F𝒬, 𝒜)(φ, ψ)`: the A_1-level part `u'`
/// and the components of length ≥ 2, one entry per basis element of `P`.
pub struct LiftProblem<'a, T: Category> {
    pub free: &'a FreeCategory,
    pub tgt: &'a T,
    pub phi: &'a CocatHom<FreeMor, T::Mor>,
    pub psi: &'a CocatHom<FreeMor, T::Mor>,
    pub p: &'a FiniteComplex,
    pub restricted: Vec<Coderivation<GenId, T::Mor>>,
    pub higher: Vec<Coderivation<FreeMor, T::Mor>>,
}

impl<T: Category> LiftProblem<'_, T> {
    fn check_shapes(&self) -> Result<()> {
        let n = self.p.rank();
        if self.restricted.len() != n || self.higher.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} restricted and {} higher images for a complex of rank {n}",
                self.restricted.len(),
                self.higher.len()
            )));
        }
        Ok(())
    }

    fn quiver_words(&self) -> Vec<Word<GenId>> {
        enumerate_words(&self.free.quiver, None, 1, 1)
    }

    fn restricted_functors(&self) -> (CocatHom<GenId, T::Mor>, CocatHom<GenId, T::Mor>) {
        (restrict_functor::<T>(self.free, self.phi), restrict_functor::<T>(self.free, self.psi))
    }

    /// Seeds each image with its A_1-level part and its given higher components.
    fn seed(&self, restricted: &[Coderivation<GenId, T::Mor>], higher: &[Coderivation<FreeMor, T::Mor>]) -> Result<Vec<Coderivation<FreeMor, T::Mor>>> {
        restricted
            .iter()
            .zip(higher)
            .map(|(r, h)| {
                let mut out = include_coder(self.free, r)?;
                out.add_scaled(&h.filtered(|w| w.len() >= 2), &self.free.ring().one());
                Ok(out)
            })
            .collect()
    }
}

/// The inverse of lifting: `u ↦ (u', (u_k)_{k>1})`.
#[allow(clippy::type_complexity)]
pub fn decompose<B: Ord + Clone>(
    free: &FreeCategory,
    u: &[Coderivation<FreeMor, B>],
) -> (Vec<Coderivation<GenId, B>>, Vec<Coderivation<FreeMor, B>>) {
    u.iter().map(|r| (restrict_coder(free, r), r.filtered(|w| w.len() >= 2))).unzip()
}

/// Lifts `(u', u_k)` to the chain map `u` with `(pd)u = (pu)B_1`.
pub fn lift_chain_map<T: Category>(problem: &LiftProblem<'_, T>) -> Result<Vec<Coderivation<FreeMor, T::Mor>>> {
    problem.check_shapes()?;
    let free = problem.free;
    let ring = free.ring().clone();
    let (phi1, psi1) = problem.restricted_functors();
    let qwords = problem.quiver_words();
    for i in 0..problem.p.rank() {
        let lhs = combine(row_of(&problem.p.d, i).into_iter(), &problem.restricted);
        let rhs = b1(&free.quiver, problem.tgt, &phi1, &psi1, &problem.restricted[i], &qwords)?;
        if lhs != rhs {
            return Err(Error::NotAChainMap(format!("u' fails (pd)u' = (pu')B_1 at {}", problem.p.names[i])));
        }
    }
    let mut images = problem.seed(&problem.restricted, &problem.higher)?;
    for n in 2..=free.leaf_budget {
        let level = basis_level(free, n);
        let jobs: Vec<(usize, &FreeMor)> = (0..images.len()).flat_map(|i| level.iter().map(move |y| (i, y))).collect();
        let values: Vec<Lin<T::Mor>> = jobs
            .par_iter()
            .map(|&(i, y)| {
                let (w, eps) = split_word(free, y);
                let e = b1_at(free, problem.tgt, problem.phi, problem.psi, &images[i], &w)?;
                let mut pdu = Lin::zero();
                for (j, c) in problem.p.d.row(i) {
                    if let Some(v) = problem.higher[j].component(&w) {
                        pdu.add_scaled(v, c);
                    }
                }
                let s = &eps * &ring.sign(problem.p.degrees[i]);
                Ok(e.minus(&pdu).scaled(&s))
            })
            .collect::<Result<_>>()?;
        for ((i, y), v) in jobs.into_iter().zip(values) {
            if !v.is_zero() {
                images[i].comps.insert(Word { start: free.source(y), mors: vec![y.clone()] }, v);
            }
        }
    }
    Ok(images)
}

/// Lifts a seed `(h', h_k)` with `(pd)h' + (ph')B_1 = restr(pu)` to `h` with
/// `pu = (pd)h + (ph)B_1`.
pub fn lift_homotopy<T: Category>(
    problem: &LiftProblem<'_, T>,
    u: &[Coderivation<FreeMor, T::Mor>],
) -> Result<Vec<Coderivation<FreeMor, T::Mor>>> {
    problem.check_shapes()?;
    let free = problem.free;
    let ring = free.ring().clone();
    let (phi1, psi1) = problem.restricted_functors();
    let qwords = problem.quiver_words();
    for i in 0..problem.p.rank() {
        let mut lhs = combine(row_of(&problem.p.d, i).into_iter(), &problem.restricted);
        lhs.add_scaled(&b1(&free.quiver, problem.tgt, &phi1, &psi1, &problem.restricted[i], &qwords)?, &ring.one());
        if lhs != restrict_coder(free, &u[i]) {
            return Err(Error::Precondition(format!(
                "seed fails dh' + h'B_1 = u' at {}",
                problem.p.names[i]
            )));
        }
    }
    let mut images = problem.seed(&problem.restricted, &problem.higher)?;
    for n in 2..=free.leaf_budget {
        let level = basis_level(free, n);
        let jobs: Vec<(usize, &FreeMor)> = (0..images.len()).flat_map(|i| level.iter().map(move |y| (i, y))).collect();
        let values: Vec<Lin<T::Mor>> = jobs
            .par_iter()
            .map(|&(i, y)| {
                let (w, eps) = split_word(free, y);
                let e = b1_at(free, problem.tgt, problem.phi, problem.psi, &images[i], &w)?;
                let mut v = u[i].component(&w).cloned().unwrap_or_default();
                for (j, c) in problem.p.d.row(i) {
                    if let Some(h) = problem.higher[j].component(&w) {
                        v.add_scaled(h, &-c.clone());
                    }
                }
                let s = &eps * &ring.sign(problem.p.degrees[i]);
                Ok(v.minus(&e).scaled(&s))
            })
            .collect::<Result<_>>()?;
        for ((i, y), v) in jobs.into_iter().zip(values) {
            if !v.is_zero() {
                images[i].comps.insert(Word { start: free.source(y), mors: vec![y.clone()] }, v);
            }
        }
    }
    Ok(images)
}

/// First basis element of `P` where `(pd)u ≠ (pu)B_1` on the given words.
pub fn chain_map_defect<T: Category>(
    free: &FreeCategory,
    tgt: &T,
    phi: &CocatHom<FreeMor, T::Mor>,
    psi: &CocatHom<FreeMor, T::Mor>,
    p: &FiniteComplex,
    u: &[Coderivation<FreeMor, T::Mor>],
    words: &[Word<FreeMor>],
) -> Result<Option<usize>> {
    for i in 0..p.rank() {
        let lhs = combine(row_of(&p.d, i).into_iter(), u).filtered(|w| words.binary_search(w).is_ok());
        let rhs = b1(free, tgt, phi, psi, &u[i], words)?;
        if lhs != rhs {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// First basis element of `P` where `pu ≠ (pd)h + (ph)B_1` on the given words.
#[allow(clippy::too_many_arguments)]
pub fn homotopy_defect<T: Category>(
    free: &FreeCategory,
    tgt: &T,
    phi: &CocatHom<FreeMor, T::Mor>,
    psi: &CocatHom<FreeMor, T::Mor>,
    p: &FiniteComplex,
    u: &[Coderivation<FreeMor, T::Mor>],
    h: &[Coderivation<FreeMor, T::Mor>],
    words: &[Word<FreeMor>],
) -> Result<Option<usize>> {
    let ring = free.ring().clone();
    for i in 0..p.rank() {
        let mut rhs = combine(row_of(&p.d, i).into_iter(), h);
        rhs.add_scaled(&b1(free, tgt, phi, psi, &h[i], words)?, &ring.one());
        let rhs = rhs.filtered(|w| words.binary_search(w).is_ok());
        let lhs = u[i].filtered(|w| words.binary_search(w).is_ok());
        if lhs != rhs {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// The truncated hom complex of a functor category with its slot basis.
pub fn hom_complex<S: Category, T: Category>(
    fc: &FunctorCategory<'_, S, T>,
    f: usize,
    g: usize,
) -> Result<(HomSpace<S::Mor, T::Mor>, FiniteComplex)> {
    let hom = fc.hom_space(f, g);
    let d = fc.b1_matrix(&hom)?;
    let names = hom
        .slots
        .iter()
        .map(|(w, m)| {
            let ws: Vec<String> = w.mors.iter().map(|x| fc.src.display(x)).collect();
            format!("[{}]↦{}", ws.join(" "), fc.tgt.display(m))
        })
        .collect();
    let complex = FiniteComplex::new(hom.degrees.clone(), names, d)?;
    Ok((hom, complex))
}

/// The A_1-transformation `φ𝐢`: `𝐢_0` at each `Xφ` and `φ_1 𝐢_1` on generators.
pub fn unit_transformation(
    q: &crate::quiver::DGQuiver,
    tgt: &AnCategory,
    phi: &CocatHom<GenId, usize>,
) -> Result<Coderivation<GenId, usize>> {
    let units = tgt.units.as_ref().ok_or_else(|| Error::MissingUnits("target has no unit data".into()))?;
    let mut out = Coderivation::zero();
    for x in 0..q.quiver.objects.len() {
        let i0 = units
            .i0
            .get(phi.obj_map[x])
            .ok_or_else(|| Error::MissingUnits(format!("no unit at {}", tgt.objects[phi.obj_map[x]])))?;
        out.add_at(Word::empty(x), i0, &tgt.ring.one());
    }
    for g in 0..q.gens().len() {
        let mut v = Lin::zero();
        for (m, c) in phi.component(&[g]).cloned().unwrap_or_default().iter() {
            if let Some(i1) = units.i1.get(m) {
                v.add_scaled(i1, c);
            }
        }
        out.add_at(Word { start: q.gens()[g].src, mors: vec![g] }, &v, &tgt.ring.one());
    }
    Ok(out)
}

/// Outcome of the restriction-equivalence verification.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub a1_rank: usize,
    pub ainf_rank: usize,
    pub words: usize,
    pub u_is_chain_map: bool,
    pub u_restricts_to_identity: bool,
    pub homotopy_holds: bool,
    pub homotopy_matrix_holds: bool,
    pub homotopy_only_h1: bool,
    pub homotopy_terms: usize,
    pub unit_cycles: UnitCycleReport,
    /// The same check with both cycles moved by the boundary of the sum of
    /// all degree −2 basis elements, so that the witnesses are nonzero.
    pub perturbed_unit_cycles: UnitCycleReport,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.u_is_chain_map
            && self.u_restricts_to_identity
            && self.homotopy_holds
            && self.homotopy_matrix_holds
            && self.homotopy_only_h1
            && self.unit_cycles.passed()
            && self.perturbed_unit_cycles.passed()
    }
}

/// Verifies that restriction `A_∞(F𝒬, 𝒜)(φ, ψ) → A_1(𝒬, 𝒜)(φ̄, ψ̄)` is a
/// homotopy equivalence at the given truncation: `u` lifts the identity of
/// the A_1 complex, `id − restr·u = B_1 h + h B_1`, and the unit cycles of
/// `φ̄` are inverse up to boundaries.
pub fn verify_restriction_equivalence(
    free: &FreeCategory,
    tgt: &AnCategory,
    phi: &CocatHom<FreeMor, usize>,
    psi: &CocatHom<FreeMor, usize>,
    max_len: usize,
    max_weight: usize,
) -> Result<EquivalenceReport> {
    if max_weight > free.leaf_budget {
        return Err(Error::Budget(format!("weight {max_weight} exceeds the leaf budget {}", free.leaf_budget)));
    }
    let ring = free.ring().clone();
    let (phi1, psi1) = (restrict_functor::<AnCategory>(free, phi), restrict_functor::<AnCategory>(free, psi));
    let a1 = FunctorCategory::new(&free.quiver, tgt, vec![phi1.clone(), psi1], 1, 1, usize::MAX)?;
    let (a1_hom, p) = hom_complex(&a1, 0, 1)?;
    let restricted: Vec<Coderivation<GenId, usize>> = (0..a1_hom.len()).map(|i| a1_hom.basis_element(i, &ring)).collect();
    let problem = LiftProblem {
        free,
        tgt,
        phi,
        psi,
        p: &p,
        restricted: restricted.clone(),
        higher: vec![Coderivation::zero(); p.rank()],
    };
    let u = lift_chain_map(&problem)?;
    let ainf = FunctorCategory::new(free, tgt, vec![phi.clone(), psi.clone()], max_len, max_weight, usize::MAX)?;
    let words = ainf.words().to_vec();
    let u_is_chain_map = chain_map_defect(free, tgt, phi, psi, &p, &u, &words)?.is_none();
    let u_restricts_to_identity = u.iter().zip(&restricted).all(|(x, r)| &restrict_coder(free, x) == r);

    let (hom, c) = hom_complex(&ainf, 0, 1)?;
    // v = id − restr·u on the truncated A_∞ hom.
    let mut v = Vec::with_capacity(hom.len());
    for i in 0..hom.len() {
        let q = hom.basis_element(i, &ring);
        let rq = a1_hom.vector(&restrict_coder(free, &q), &ring)?;
        let ru = combine(rq.into_iter().enumerate(), &u);
        v.push(q.minus(&ru, &ring));
    }
    let zero_seed = vec![Coderivation::zero(); hom.len()];
    let hproblem = LiftProblem { free, tgt, phi, psi, p: &c, restricted: zero_seed, higher: vec![Coderivation::zero(); hom.len()] };
    let h = lift_homotopy(&hproblem, &v)?;
    let h: Vec<Coderivation<FreeMor, usize>> = h.into_iter().map(|x| x.filtered(|w| words.binary_search(w).is_ok())).collect();
    let homotopy_holds = homotopy_defect(free, tgt, phi, psi, &c, &v, &h, &words)?.is_none();
    let homotopy_only_h1 = h.iter().all(|x| x.comps.keys().all(|w| w.len() == 1));
    let homotopy_terms = h.iter().map(|x| x.comps.values().map(Lin::len).sum::<usize>()).sum();
    // Matrix double entry: V = D·H + H·D.
    let to_matrix = |rows: &[Coderivation<FreeMor, usize>]| -> Result<SparseMatrix> {
        let mut m = SparseMatrix::zero(ring.clone(), hom.len(), hom.len());
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in hom.vector(r, &ring)?.into_iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x);
                }
            }
        }
        Ok(m)
    };
    let (vm, hm) = (to_matrix(&v)?, to_matrix(&h)?);
    let mut dh = mat_mul(&c.d, &hm)?;
    for (i, j, x) in mat_mul(&hm, &c.d)?.entries() {
        dh.add_to(i, j, x);
    }
    let homotopy_matrix_holds = dh == vm;

    let unit = unit_transformation(&free.quiver, tgt, &phi1)?;
    let a1_phi = FunctorCategory::new(&free.quiver, tgt, vec![phi1], 1, 1, usize::MAX)?;
    let unit_cycles = unit_cycle_check(&a1_phi, 0, &unit, &unit, &unit)?;
    let endo = a1_phi.hom_space(0, 0);
    let mut z = Coderivation::zero();
    for i in (0..endo.len()).filter(|&i| endo.degrees[i] == -2) {
        z.add_scaled(&endo.basis_element(i, &ring), &ring.one());
    }
    let moved = unit.minus(&a1_phi.b1(0, 0, &z)?, &ring);
    let perturbed_unit_cycles = unit_cycle_check(&a1_phi, 0, &moved, &moved, &unit)?;
    Ok(EquivalenceReport {
        a1_rank: p.rank(),
        ainf_rank: hom.len(),
        words: words.len(),
        u_is_chain_map,
        u_restricts_to_identity,
        homotopy_holds,
        homotopy_matrix_holds,
        homotopy_only_h1,
        homotopy_terms,
        unit_cycles,
        perturbed_unit_cycles,
    })
}

/// The natural transformation from `f` to the strict functor with the same
/// restriction, obtained by lifting `f̄𝐢`.
pub struct StrictIso {
    pub strict: CocatHom<FreeMor, usize>,
    pub transformation: Coderivation<FreeMor, usize>,
    pub is_closed: bool,
    pub zero_component_is_unit: bool,
    pub restricts_to_unit: bool,
}

pub fn strictify_iso(free: &FreeCategory, tgt: &AnCategory, f: &CocatHom<FreeMor, usize>, max_len: usize, max_weight: usize) -> Result<StrictIso> {
    let ring = free.ring().clone();
    let fbar = restrict_functor::<AnCategory>(free, f);
    let strict = extend_strict(free, tgt, &fbar)?;
    let unit = unit_transformation(&free.quiver, tgt, &fbar)?;
    let p = FiniteComplex::new(vec![-1], vec!["p".into()], SparseMatrix::zero(ring.clone(), 1, 1))?;
    let problem = LiftProblem {
        free,
        tgt,
        phi: f,
        psi: &strict,
        p: &p,
        restricted: vec![unit.clone()],
        higher: vec![Coderivation::zero()],
    };
    let mut u = lift_chain_map(&problem)?;
    let t = u.pop().unwrap();
    let words = enumerate_words(free, None, max_len, max_weight);
    let is_closed = b1(free, tgt, f, &strict, &t, &words)?.is_zero();
    let units = tgt.units.as_ref().expect("checked by unit_transformation");
    let zero_component_is_unit = (0..free.object_count()).all(|x| {
        t.component(&Word::empty(x)).cloned().unwrap_or_default() == units.i0[f.obj_map[x]]
    });
    let restricts_to_unit = restrict_coder(free, &t) == unit;
    Ok(StrictIso { strict, transformation: t, is_closed, zero_component_is_unit, restricts_to_unit })
}

/// Both sides of the three-sum identity for a coderivation `r: φ → ψ` on one
/// word: `−θ(φ, X, ψ)b + (−1)^r θ(φ, Y, ψ)b` and
/// `(−1)^r Σ [θ(φ, r, ψ)b]((w)(1 ⊗ b ⊗ 1))`, where `X = θ(φ, r, ψ)b` and
/// `Y = (1 ⊗ b ⊗ 1) r`.  `r` must be homogeneous and `words` closed under
/// subwords.
#[allow(clippy::type_complexity)]
pub fn three_sum_sides<S: Category, T: Category>(
    src: &S,
    tgt: &T,
    phi: &CocatHom<S::Mor, T::Mor>,
    psi: &CocatHom<S::Mor, T::Mor>,
    r: &Coderivation<S::Mor, T::Mor>,
    words: &[Word<S::Mor>],
    w: &Word<S::Mor>,
) -> Result<(Lin<T::Mor>, Lin<T::Mor>)> {
    let ring = src.ring().clone();
    let deg = r.degree(src, tgt).unwrap_or(0);
    let rb = |x: &Word<S::Mor>| -> Result<Lin<T::Mor>> {
        let mut out = Lin::zero();
        for (u, c) in &theta(src, tgt, &[phi, psi], &[r], x)? {
            out.add_scaled(&b_word(tgt, u)?, c);
        }
        Ok(out)
    };
    let mut x = Coderivation::zero();
    let mut y = Coderivation::zero();
    for v in words {
        x.add_at(v.clone(), &rb(v)?, &ring.one());
        let mut yv = Lin::zero();
        for (v2, c) in &b_in_blocks(src, v)? {
            if let Some(rv) = r.component(v2) {
                yv.add_scaled(rv, c);
            }
        }
        y.add_at(v.clone(), &yv, &ring.one());
    }
    let mut lhs = Lin::zero();
    for (u, c) in &theta(src, tgt, &[phi, psi], &[&x], w)? {
        lhs.add_scaled(&b_word(tgt, u)?, &-c.clone());
    }
    let sr = ring.sign(deg);
    for (u, c) in &theta(src, tgt, &[phi, psi], &[&y], w)? {
        lhs.add_scaled(&b_word(tgt, u)?, &(c * &sr));
    }
    let mut rhs = Lin::zero();
    for (w2, c) in &b_in_blocks(src, w)? {
        rhs.add_scaled(&rb(w2)?, &(c * &sr));
    }
    Ok((lhs, rhs))
}
