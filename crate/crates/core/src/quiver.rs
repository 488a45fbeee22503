//! Graded quivers, words, the Koszul sign engine, complexes and cones.
//!
//! Every degree stored here is a degree in the shifted quiver: the
//! suspension `s` has degree −1, differentials and all operations `b_n`
//! have degree +1.  Operators act on the right, so applying
//! `op_1 ⊗ … ⊗ op_n` to `x_1 ⊗ … ⊗ x_n` costs the sign
//! `(−1)^{Σ_{i<j} deg(op_i)·deg(x_j)}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::scalars::{image_membership, left_kernel, mat_mul, Lin, Ring, Scalar, SparseMatrix};

pub type ObjId = usize;
pub type GenId = usize;

/// A graded quiver with multilinear operations `b_n` of degree +1.
///
/// Morphisms are basis elements; `weight` is an additive size (leaf count for
/// free categories, 1 otherwise) used to truncate computations.
pub trait Category: Sync {
    type Mor: Clone + Ord + Eq + Hash + Debug + Send + Sync;

    fn ring(&self) -> &Ring;
    fn object_count(&self) -> usize;
    fn object_name(&self, x: ObjId) -> String;
    fn source(&self, m: &Self::Mor) -> ObjId;
    fn target(&self, m: &Self::Mor) -> ObjId;
    fn degree(&self, m: &Self::Mor) -> i64;
    fn weight(&self, _m: &Self::Mor) -> usize {
        1
    }
    /// `b_n` on a composable word of length `n ≥ 1`.
    fn b(&self, xs: &[Self::Mor]) -> Result<Lin<Self::Mor>>;
    /// Largest `n` for which `b_n` is defined (`None`: all `n`).
    fn level(&self) -> Option<usize>;
    /// Basis of the hom from `x` to `y` restricted to weight ≤ `max_weight`.
    fn hom_basis(&self, x: ObjId, y: ObjId, max_weight: usize) -> Vec<Self::Mor>;
    fn display(&self, m: &Self::Mor) -> String;
}

/// A composable word of basis morphisms starting at `start`.  The empty word
/// stands for the unit of `T^0` at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word<M> {
    pub start: ObjId,
    pub mors: Vec<M>,
}

impl<M: Clone> Word<M> {
    pub fn empty(start: ObjId) -> Self {
        Word { start, mors: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.mors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mors.is_empty()
    }
}

impl<M: Clone + Ord> Word<M> {
    /// Checks composability and returns the end object.
    pub fn end<C: Category<Mor = M>>(&self, cat: &C) -> Result<ObjId> {
        let mut at = self.start;
        for m in &self.mors {
            if cat.source(m) != at {
                return Err(Error::EndpointMismatch(format!(
                    "{} does not start at {}",
                    cat.display(m),
                    cat.object_name(at)
                )));
            }
            at = cat.target(m);
        }
        Ok(at)
    }

    pub fn degree<C: Category<Mor = M>>(&self, cat: &C) -> i64 {
        self.mors.iter().map(|m| cat.degree(m)).sum()
    }

    pub fn weight<C: Category<Mor = M>>(&self, cat: &C) -> usize {
        self.mors.iter().map(|m| cat.weight(m)).sum()
    }

    /// The subword `mors[i..j]` with its start object.
    pub fn slice<C: Category<Mor = M>>(&self, cat: &C, i: usize, j: usize) -> Word<M> {
        let start = if i == 0 { self.start } else { cat.target(&self.mors[i - 1]) };
        Word { start, mors: self.mors[i..j].to_vec() }
    }
}

/// All composable words from `from` (or from every object) with length ≤
/// `max_len` and total weight ≤ `max_weight`, including empty words.
pub fn enumerate_words<C: Category>(
    cat: &C,
    from: Option<ObjId>,
    max_len: usize,
    max_weight: usize,
) -> Vec<Word<C::Mor>> {
    let n = cat.object_count();
    let mut out_of: Vec<Vec<C::Mor>> = vec![Vec::new(); n];
    for (x, out) in out_of.iter_mut().enumerate() {
        for y in 0..n {
            out.extend(cat.hom_basis(x, y, max_weight));
        }
    }
    let starts: Vec<ObjId> = match from {
        Some(x) => vec![x],
        None => (0..n).collect(),
    };
    let mut out = Vec::new();
    for s in starts {
        let mut stack = vec![(Word::empty(s), s, 0usize)];
        while let Some((w, at, wt)) = stack.pop() {
            if w.len() < max_len {
                for m in &out_of[at] {
                    let nw = wt + cat.weight(m);
                    if nw <= max_weight {
                        let mut mors = w.mors.clone();
                        mors.push(m.clone());
                        stack.push((Word { start: s, mors }, cat.target(m), nw));
                    }
                }
            }
            out.push(w);
        }
    }
    out.sort();
    out
}

/// A generating morphism of a quiver, with its degree in the shifted quiver.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub src: ObjId,
    pub dst: ObjId,
    pub sdeg: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedQuiver {
    pub ring: Ring,
    pub objects: Vec<String>,
    pub gens: Vec<Generator>,
}

impl GradedQuiver {
    pub fn new(ring: Ring, objects: Vec<String>, gens: Vec<Generator>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if seen.insert(o.clone(), i).is_some() {
                return Err(Error::Parse(format!("duplicate object {o:?}")));
            }
        }
        let mut names = HashMap::new();
        for g in &gens {
            if g.src >= objects.len() || g.dst >= objects.len() {
                return Err(Error::UnknownName(format!("endpoint of {}", g.name)));
            }
            if names.insert(g.name.clone(), ()).is_some() {
                return Err(Error::Parse(format!("duplicate morphism name {:?}", g.name)));
            }
        }
        Ok(GradedQuiver { ring, objects, gens })
    }

    pub fn object_id(&self, name: &str) -> Result<ObjId> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownName(format!("object {name:?}")))
    }

    pub fn gen_id(&self, name: &str) -> Result<GenId> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownName(format!("morphism {name:?}")))
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> impl Iterator<Item = GenId> + '_ {
        self.gens.iter().enumerate().filter(move |(_, g)| g.src == x && g.dst == y).map(|(i, _)| i)
    }
}

/// A degree-carrying linear map on basis elements; missing images are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap<M: Ord> {
    pub degree: i64,
    pub images: BTreeMap<M, Lin<M>>,
}

impl<M: Ord + Clone> GradedMap<M> {
    pub fn new(degree: i64) -> Self {
        GradedMap { degree, images: BTreeMap::new() }
    }

    pub fn identity(basis: impl IntoIterator<Item = M>, ring: &Ring) -> Self {
        GradedMap {
            degree: 0,
            images: basis.into_iter().map(|m| (m.clone(), Lin::single(m, ring.one()))).collect(),
        }
    }

    pub fn apply(&self, m: &M) -> Lin<M> {
        self.images.get(m).cloned().unwrap_or_default()
    }

    pub fn apply_lin(&self, x: &Lin<M>) -> Lin<M> {
        x.map_linear(|m| self.apply(m))
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &GradedMap<M>) -> GradedMap<M> {
        let images = self
            .images
            .iter()
            .map(|(m, v)| (m.clone(), other.apply_lin(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        GradedMap { degree: self.degree + other.degree, images }
    }

    /// Checks that every image term has degree `deg(source) + degree`.
    pub fn check_homogeneous(&self, deg: impl Fn(&M) -> i64) -> Result<()>
    where
        M: Debug,
    {
        for (m, v) in &self.images {
            for (t, _) in v {
                if deg(t) != deg(m) + self.degree {
                    return Err(Error::Inhomogeneous(format!(
                        "{m:?} of degree {} maps to {t:?} of degree {} under a map of degree {}",
                        deg(m),
                        deg(t),
                        self.degree
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One tensor factor of an operator: the identity or a graded map.
pub enum Op<'a, M: Ord> {
    Id,
    Map(&'a GradedMap<M>),
}

impl<M: Ord> Op<'_, M> {
    pub fn degree(&self) -> i64 {
        match self {
            Op::Id => 0,
            Op::Map(g) => g.degree,
        }
    }
}

/// Applies `op_1 ⊗ … ⊗ op_n` factorwise with the right-operator Koszul sign.
pub fn koszul_apply<M: Ord + Clone>(
    ring: &Ring,
    ops: &[Op<'_, M>],
    word: &[M],
    deg: impl Fn(&M) -> i64,
) -> Result<Lin<Vec<M>>> {
    if ops.len() != word.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} operators for {} factors",
            ops.len(),
            word.len()
        )));
    }
    let mut sign = 0i64;
    let mut right = 0i64;
    for (op, x) in ops.iter().zip(word).rev() {
        sign += op.degree() * right;
        right += deg(x);
    }
    let mut acc: Lin<Vec<M>> = Lin::single(Vec::new(), ring.sign(sign));
    for (op, x) in ops.iter().zip(word) {
        let image = match op {
            Op::Id => Lin::single(x.clone(), ring.one()),
            Op::Map(g) => g.apply(x),
        };
        let mut next = Lin::zero();
        for (prefix, c) in &acc {
            for (y, e) in &image {
                let mut w = prefix.clone();
                w.push(y.clone());
                next.add_term(w, c * e);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Sign exponent relating `m_n` on unshifted elements to `b_n` on their
/// suspensions: `(s x_1 ⊗ … ⊗ s x_n) b_n = (−1)^e s m_n(x_1, …, x_n)` where
/// `e = Σ_j (j − 1)·deg x_j` with unshifted degrees.
pub fn suspension_sign(unshifted_degrees: &[i64]) -> i64 {
    unshifted_degrees.iter().enumerate().map(|(j, d)| j as i64 * d).sum()
}

/// A word carrying a formal suspension on its last factor:
/// `x_1 ⊗ … ⊗ (x_n s^shift)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftedWord<M> {
    pub mors: Vec<M>,
    pub shift: i64,
}

impl<M: Clone> ShiftedWord<M> {
    pub fn new(mors: Vec<M>) -> Result<Self> {
        if mors.is_empty() {
            return Err(Error::Precondition("cannot suspend an empty word".into()));
        }
        Ok(ShiftedWord { mors, shift: 0 })
    }

    /// Applies `s^k = 1 ⊗ … ⊗ 1 ⊗ s^k`; no sign arises since the operator
    /// sits on the last factor.
    pub fn suspend(&self, k: i64) -> Self {
        ShiftedWord { mors: self.mors.clone(), shift: self.shift + k }
    }

    pub fn degree(&self, deg: impl Fn(&M) -> i64) -> i64 {
        self.mors.iter().map(deg).sum::<i64>() - self.shift
    }
}

/// A differential graded quiver: generators with a degree +1 differential
/// squaring to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGQuiver {
    pub quiver: GradedQuiver,
    pub d: GradedMap<GenId>,
}

impl DGQuiver {
    pub fn new(quiver: GradedQuiver, d: GradedMap<GenId>) -> Result<Self> {
        if d.degree != 1 {
            return Err(Error::Inhomogeneous("differential must have degree 1".into()));
        }
        for (&g, v) in &d.images {
            let gg = quiver.gens.get(g).ok_or_else(|| Error::UnknownName(format!("generator {g}")))?;
            for (t, _) in v {
                let tt = &quiver.gens[*t];
                if tt.src != gg.src || tt.dst != gg.dst {
                    return Err(Error::EndpointMismatch(format!(
                        "d({}) contains {} with different endpoints",
                        gg.name, tt.name
                    )));
                }
            }
        }
        d.check_homogeneous(|&g| quiver.gens[g].sdeg)?;
        let dd = d.then(&d);
        if let Some((g, _)) = dd.images.iter().next() {
            return Err(Error::NotAComplex(format!("d² ≠ 0 on {}", quiver.gens[*g].name)));
        }
        Ok(DGQuiver { quiver, d })
    }

    pub fn ring(&self) -> &Ring {
        &self.quiver.ring
    }

    pub fn gens(&self) -> &[Generator] {
        &self.quiver.gens
    }
}

impl Category for DGQuiver {
    type Mor = GenId;

    fn ring(&self) -> &Ring {
        &self.quiver.ring
    }
    fn object_count(&self) -> usize {
        self.quiver.objects.len()
    }
    fn object_name(&self, x: ObjId) -> String {
        self.quiver.objects[x].clone()
    }
    fn source(&self, m: &GenId) -> ObjId {
        self.quiver.gens[*m].src
    }
    fn target(&self, m: &GenId) -> ObjId {
        self.quiver.gens[*m].dst
    }
    fn degree(&self, m: &GenId) -> i64 {
        self.quiver.gens[*m].sdeg
    }
    fn b(&self, xs: &[GenId]) -> Result<Lin<GenId>> {
        match xs {
            [x] => Ok(self.d.apply(x)),
            _ => Ok(Lin::zero()),
        }
    }
    fn level(&self) -> Option<usize> {
        None
    }
    fn hom_basis(&self, x: ObjId, y: ObjId, max_weight: usize) -> Vec<GenId> {
        if max_weight == 0 {
            return Vec::new();
        }
        self.quiver.hom(x, y).collect()
    }
    fn display(&self, m: &GenId) -> String {
        self.quiver.gens[*m].name.clone()
    }
}

/// A bounded complex of free modules with a chosen basis.  The differential
/// acts on row vectors: row `i` of `d` is the image of basis element `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteComplex {
    pub degrees: Vec<i64>,
    pub names: Vec<String>,
    pub d: SparseMatrix,
}

impl FiniteComplex {
    pub fn new(degrees: Vec<i64>, names: Vec<String>, d: SparseMatrix) -> Result<Self> {
        let n = degrees.len();
        if names.len() != n || d.rows() != n || d.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "complex of rank {n} with {} names and a {}x{} differential",
                names.len(),
                d.rows(),
                d.cols()
            )));
        }
        for (i, j, _) in d.entries() {
            if degrees[j] != degrees[i] + 1 {
                return Err(Error::Inhomogeneous(format!(
                    "differential maps {} (degree {}) to {} (degree {})",
                    names[i], degrees[i], names[j], degrees[j]
                )));
            }
        }
        if !mat_mul(&d, &d)?.is_zero() {
            return Err(Error::NotAComplex("d² ≠ 0".into()));
        }
        Ok(FiniteComplex { degrees, names, d })
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn ring(&self) -> &Ring {
        self.d.ring()
    }

    /// Whether every cycle is a boundary.
    pub fn is_acyclic(&self) -> Result<bool> {
        for z in left_kernel(&self.d) {
            if image_membership(&self.d, &z)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks that `alpha` (rows indexed by `self`, columns by `other`) is a
    /// degree-0 chain map.
    pub fn check_chain_map(&self, other: &FiniteComplex, alpha: &SparseMatrix) -> Result<()> {
        if alpha.rows() != self.rank() || alpha.cols() != other.rank() {
            return Err(Error::DimensionMismatch("chain map shape".into()));
        }
        for (i, j, _) in alpha.entries() {
            if self.degrees[i] != other.degrees[j] {
                return Err(Error::Inhomogeneous(format!(
                    "chain map sends {} to {} of another degree",
                    self.names[i], other.names[j]
                )));
            }
        }
        let lhs = mat_mul(&self.d, alpha)?;
        let rhs = mat_mul(alpha, &other.d)?;
        if lhs != rhs {
            return Err(Error::NotAChainMap("d·α ≠ α·d".into()));
        }
        Ok(())
    }
}

/// The cone `Q ⊕ P[1]` of a chain map `alpha: P → Q` with differential
/// `(q, ps) ↦ (q d + p α, −p d s)`.  Basis: that of `Q`, then `p s` for each
/// basis element `p` of `P`.
pub fn cone(p: &FiniteComplex, q: &FiniteComplex, alpha: &SparseMatrix) -> Result<FiniteComplex> {
    p.check_chain_map(q, alpha)?;
    let (np, nq) = (p.rank(), q.rank());
    let ring = q.ring().clone();
    let mut d = SparseMatrix::zero(ring, nq + np, nq + np);
    for (i, j, v) in q.d.entries() {
        d.set(i, j, v.clone());
    }
    for (i, j, v) in alpha.entries() {
        d.set(nq + i, j, v.clone());
    }
    for (i, j, v) in p.d.entries() {
        d.set(nq + i, nq + j, -v.clone());
    }
    let mut degrees = q.degrees.clone();
    degrees.extend(p.degrees.iter().map(|d| d - 1));
    let mut names = q.names.clone();
    names.extend(p.names.iter().map(|n| format!("s{n}")));
    FiniteComplex::new(degrees, names, d)
}

/// Sign `(−1)^e` as a scalar of the given ring.
pub fn sign(ring: &Ring, e: i64) -> Scalar {
    ring.sign(e)
}
