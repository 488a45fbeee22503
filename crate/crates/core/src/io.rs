//! JSON documents for quivers, finite target categories, functors and
//! transformations.  All degrees are shifted degrees.  Coefficients are
//! written as strings (`"3"`, `"-1/2"`) and may be given as integers.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::ainfty::{AnCategory, UnitData};
use crate::error::{Error, Result};
use crate::free::{FreeCategory, FreeMor};
use crate::quiver::{Category, DGQuiver, GenId, Generator, GradedMap, GradedQuiver, ObjId, Word};
use crate::scalars::{Lin, Ring};
use crate::tensor::{CocatHom, Coderivation};
use crate::trees::PlaneTree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Coeff,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub sdeg: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearEntry {
    pub on: String,
    pub value: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverFile {
    pub ring: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSpec>,
    #[serde(default)]
    pub differential: Vec<LinearEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub name: String,
    pub degrees: Vec<i64>,
    /// Entries `(i, j, c)`: `e_i ↦ c·e_j`.
    #[serde(default)]
    pub differential: Vec<(usize, usize, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationSpec {
    pub inputs: Vec<String>,
    pub value: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitsSpec {
    pub i0: BTreeMap<String, Vec<Term>>,
    #[serde(default)]
    pub i1: Vec<LinearEntry>,
}

/// A finite target category, either as endomorphism DG category of a list of
/// complexes or explicitly by its operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryFile {
    pub ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complexes: Option<Vec<ComplexSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphisms: Option<Vec<MorphismSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operations: Option<Vec<OperationSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<UnitsSpec>,
}

/// One input morphism: a generator name, or a tree with its leaf word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputSpec {
    Generator(String),
    Tree { tree: String, word: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub inputs: Vec<InputSpec>,
    pub output: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Quiver,
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorFile {
    pub ring: String,
    pub source: SourceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaves: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    pub objects: BTreeMap<String, String>,
    pub components: Vec<ComponentSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformationComponent {
    pub start: String,
    pub inputs: Vec<InputSpec>,
    pub output: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformationFile {
    pub ring: String,
    pub source: SourceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaves: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    pub degree: i64,
    pub components: Vec<TransformationComponent>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(x: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(x)?;
    s.push('\n');
    Ok(s)
}

fn index_of(names: &[String], name: &str, what: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::UnknownName(format!("{what} {name}")))
}

fn lin_from_terms(ring: &Ring, terms: &[Term], lookup: impl Fn(&str) -> Result<usize>) -> Result<Lin<usize>> {
    let mut out = Lin::zero();
    for t in terms {
        let c = match &t.coeff {
            Coeff::Int(v) => ring.from_i64(*v),
            Coeff::Text(s) => ring.parse_scalar(s)?,
        };
        out.add_term(lookup(&t.name)?, c);
    }
    Ok(out)
}

fn terms_from_lin(x: &Lin<usize>, name: impl Fn(usize) -> String) -> Vec<Term> {
    x.iter().map(|(m, c)| Term { coeff: Coeff::Text(c.to_string()), name: name(*m) }).collect()
}

impl QuiverFile {
    pub fn to_quiver(&self) -> Result<DGQuiver> {
        let ring: Ring = self.ring.parse()?;
        let mut gens = Vec::with_capacity(self.morphisms.len());
        for m in &self.morphisms {
            gens.push(Generator {
                name: m.name.clone(),
                src: index_of(&self.objects, &m.src, "object")?,
                dst: index_of(&self.objects, &m.dst, "object")?,
                sdeg: m.sdeg,
            });
        }
        let q = GradedQuiver::new(ring.clone(), self.objects.clone(), gens)?;
        let mut d = GradedMap::new(1);
        for e in &self.differential {
            let g = q.gen_id(&e.on)?;
            if d.images.contains_key(&g) {
                return Err(Error::Parse(format!("differential given twice on {}", e.on)));
            }
            let v = lin_from_terms(&ring, &e.value, |n| q.gen_id(n))?;
            if !v.is_zero() {
                d.images.insert(g, v);
            }
        }
        DGQuiver::new(q, d)
    }

    pub fn from_quiver(q: &DGQuiver) -> QuiverFile {
        let objects = q.quiver.objects.clone();
        let gens = q.gens();
        QuiverFile {
            ring: q.ring().to_string(),
            objects: objects.clone(),
            morphisms: gens
                .iter()
                .map(|g| MorphismSpec {
                    name: g.name.clone(),
                    src: objects[g.src].clone(),
                    dst: objects[g.dst].clone(),
                    sdeg: g.sdeg,
                })
                .collect(),
            differential: q
                .d
                .images
                .iter()
                .map(|(g, v)| LinearEntry { on: gens[*g].name.clone(), value: terms_from_lin(v, |h| gens[h].name.clone()) })
                .collect(),
        }
    }
}

impl CategoryFile {
    pub fn to_category(&self) -> Result<AnCategory> {
        let ring: Ring = self.ring.parse()?;
        if let Some(cs) = &self.complexes {
            if self.morphisms.is_some() || self.operations.is_some() {
                return Err(Error::Parse("give either complexes or explicit operations, not both".into()));
            }
            let list: Vec<_> = cs.iter().map(|c| (c.name.clone(), c.degrees.clone(), c.differential.clone())).collect();
            return AnCategory::from_complexes(ring, &list);
        }
        let objects = self.objects.clone().ok_or_else(|| Error::Parse("missing objects".into()))?;
        let specs = self.morphisms.clone().ok_or_else(|| Error::Parse("missing morphisms".into()))?;
        let mut mors = Vec::with_capacity(specs.len());
        for m in &specs {
            mors.push(Generator {
                name: m.name.clone(),
                src: index_of(&objects, &m.src, "object")?,
                dst: index_of(&objects, &m.dst, "object")?,
                sdeg: m.sdeg,
            });
        }
        let names: Vec<String> = mors.iter().map(|m| m.name.clone()).collect();
        let lookup = |n: &str| index_of(&names, n, "morphism");
        let mut ops = BTreeMap::new();
        for op in self.operations.iter().flatten() {
            let inputs = op.inputs.iter().map(|n| lookup(n)).collect::<Result<Vec<_>>>()?;
            let v = lin_from_terms(&ring, &op.value, lookup)?;
            if ops.insert(inputs, v).is_some() {
                return Err(Error::Parse(format!("operation given twice on {:?}", op.inputs)));
            }
        }
        ops.retain(|_, v: &mut Lin<usize>| !v.is_zero());
        let cat = AnCategory::new(ring.clone(), objects.clone(), mors, ops, self.level)?;
        match &self.units {
            None => Ok(cat),
            Some(u) => {
                let mut i0 = Vec::with_capacity(objects.len());
                for x in &objects {
                    let terms = u.i0.get(x).ok_or_else(|| Error::MissingUnits(format!("no unit at {x}")))?;
                    i0.push(lin_from_terms(&ring, terms, lookup)?);
                }
                let mut i1 = BTreeMap::new();
                for e in &u.i1 {
                    i1.insert(lookup(&e.on)?, lin_from_terms(&ring, &e.value, lookup)?);
                }
                cat.with_units(UnitData { i0, i1 })
            }
        }
    }

    /// The explicit form of a category.
    pub fn from_category(cat: &AnCategory) -> CategoryFile {
        let name = |m: usize| cat.mors[m].name.clone();
        CategoryFile {
            ring: cat.ring.to_string(),
            complexes: None,
            objects: Some(cat.objects.clone()),
            morphisms: Some(
                cat.mors
                    .iter()
                    .map(|m| MorphismSpec {
                        name: m.name.clone(),
                        src: cat.objects[m.src].clone(),
                        dst: cat.objects[m.dst].clone(),
                        sdeg: m.sdeg,
                    })
                    .collect(),
            ),
            operations: Some(
                cat.ops
                    .iter()
                    .map(|(k, v)| OperationSpec { inputs: k.iter().map(|m| name(*m)).collect(), value: terms_from_lin(v, name) })
                    .collect(),
            ),
            level: cat.level,
            units: cat.units.as_ref().map(|u| UnitsSpec {
                i0: cat.objects.iter().cloned().zip(u.i0.iter().map(|v| terms_from_lin(v, name))).collect(),
                i1: u.i1.iter().map(|(m, v)| LinearEntry { on: name(*m), value: terms_from_lin(v, name) }).collect(),
            }),
        }
    }
}

fn object_map(objects: &BTreeMap<String, String>, src: &[String], tgt: &AnCategory) -> Result<Vec<ObjId>> {
    let mut out = Vec::with_capacity(src.len());
    for x in src {
        let y = objects.get(x).ok_or_else(|| Error::UnknownName(format!("object map misses {x}")))?;
        out.push(index_of(&tgt.objects, y, "target object")?);
    }
    if let Some(extra) = objects.keys().find(|k| !src.contains(k)) {
        return Err(Error::UnknownName(format!("object {extra} is not in the source")));
    }
    Ok(out)
}

fn object_names(obj_map: &[ObjId], src: &[String], tgt: &AnCategory) -> BTreeMap<String, String> {
    src.iter().cloned().zip(obj_map.iter().map(|&y| tgt.objects[y].clone())).collect()
}

fn free_input(free: &FreeCategory, spec: &InputSpec) -> Result<FreeMor> {
    let q = &free.quiver.quiver;
    match spec {
        InputSpec::Generator(n) => Ok(free.generator(q.gen_id(n)?)),
        InputSpec::Tree { tree, word } => {
            let t: PlaneTree = tree.parse()?;
            let gens = word.iter().map(|n| q.gen_id(n)).collect::<Result<Vec<_>>>()?;
            free.mor(&t, gens)
        }
    }
}

fn free_input_spec(free: &FreeCategory, m: &FreeMor) -> InputSpec {
    let gens = free.quiver.gens();
    if m.tree == free.leaf_tree() {
        InputSpec::Generator(gens[m.gens[0]].name.clone())
    } else {
        InputSpec::Tree {
            tree: free.tree(m.tree).to_string(),
            word: m.gens.iter().map(|g| gens[*g].name.clone()).collect(),
        }
    }
}

fn check_composable<C: Category>(src: &C, start: ObjId, mors: &[C::Mor]) -> Result<ObjId> {
    Word { start, mors: mors.to_vec() }.end(src)
}

fn check_degree(expected: i64, out: &Lin<usize>, tgt: &AnCategory, what: &str) -> Result<()> {
    for (m, _) in out {
        if tgt.mors[*m].sdeg != expected {
            return Err(Error::Inhomogeneous(format!(
                "{what}: output {} has degree {}, expected {expected}",
                tgt.mors[*m].name, tgt.mors[*m].sdeg
            )));
        }
    }
    Ok(())
}

fn check_endpoints(out: &Lin<usize>, tgt: &AnCategory, x: ObjId, y: ObjId, what: &str) -> Result<()> {
    for (m, _) in out {
        if tgt.mors[*m].src != x || tgt.mors[*m].dst != y {
            return Err(Error::EndpointMismatch(format!("{what}: output {} has the wrong endpoints", tgt.mors[*m].name)));
        }
    }
    Ok(())
}

impl FunctorFile {
    /// A map of quivers `𝒬 → 𝒜`; only generator inputs of length one are allowed.
    pub fn to_quiver_map(&self, q: &DGQuiver, tgt: &AnCategory) -> Result<CocatHom<GenId, usize>> {
        if self.source != SourceKind::Quiver {
            return Err(Error::Parse("expected a functor file with source \"quiver\"".into()));
        }
        let ring: Ring = self.ring.parse()?;
        if ring != tgt.ring {
            return Err(Error::MixedScalarKinds(format!("file ring {ring}, target ring {}", tgt.ring)));
        }
        let obj_map = object_map(&self.objects, &q.quiver.objects, tgt)?;
        let mut f = CocatHom::new(obj_map.clone());
        let names: Vec<String> = tgt.mors.iter().map(|m| m.name.clone()).collect();
        for c in &self.components {
            let g = match c.inputs.as_slice() {
                [InputSpec::Generator(n)] => q.quiver.gen_id(n)?,
                _ => return Err(Error::Parse("a quiver map has single-generator inputs only".into())),
            };
            let out = lin_from_terms(&ring, &c.output, |n| index_of(&names, n, "morphism"))?;
            let gen = &q.gens()[g];
            check_degree(gen.sdeg, &out, tgt, &gen.name)?;
            check_endpoints(&out, tgt, obj_map[gen.src], obj_map[gen.dst], &gen.name)?;
            if f.component(&[g]).is_some() {
                return Err(Error::Parse(format!("component given twice on {}", gen.name)));
            }
            if !out.is_zero() {
                f.set(vec![g], out)?;
            }
        }
        Ok(f)
    }

    /// A functor `F𝒬 → 𝒜` given by components on words of free morphisms.
    pub fn to_free_functor(&self, free: &FreeCategory, tgt: &AnCategory) -> Result<CocatHom<FreeMor, usize>> {
        let ring: Ring = self.ring.parse()?;
        if ring != tgt.ring {
            return Err(Error::MixedScalarKinds(format!("file ring {ring}, target ring {}", tgt.ring)));
        }
        let obj_map = object_map(&self.objects, &free.quiver.quiver.objects, tgt)?;
        let mut f = CocatHom::new(obj_map.clone());
        let names: Vec<String> = tgt.mors.iter().map(|m| m.name.clone()).collect();
        for c in &self.components {
            let word = c.inputs.iter().map(|s| free_input(free, s)).collect::<Result<Vec<_>>>()?;
            let start = word.first().map(|m| free.source(m)).ok_or_else(|| Error::Parse("empty functor input".into()))?;
            let end = check_composable(free, start, &word)?;
            let out = lin_from_terms(&ring, &c.output, |n| index_of(&names, n, "morphism"))?;
            let deg: i64 = word.iter().map(|m| free.degree(m)).sum();
            check_degree(deg, &out, tgt, "functor component")?;
            check_endpoints(&out, tgt, obj_map[start], obj_map[end], "functor component")?;
            if f.component(&word).is_some() {
                return Err(Error::Parse("functor component given twice".into()));
            }
            if !out.is_zero() {
                f.set(word, out)?;
            }
        }
        Ok(f)
    }

    pub fn from_quiver_map(q: &DGQuiver, tgt: &AnCategory, f: &CocatHom<GenId, usize>) -> FunctorFile {
        let gens = q.gens();
        FunctorFile {
            ring: tgt.ring.to_string(),
            source: SourceKind::Quiver,
            leaves: None,
            arity: None,
            objects: object_names(&f.obj_map, &q.quiver.objects, tgt),
            components: f
                .comps
                .iter()
                .map(|(w, v)| ComponentSpec {
                    inputs: w.iter().map(|g| InputSpec::Generator(gens[*g].name.clone())).collect(),
                    output: terms_from_lin(v, |m| tgt.mors[m].name.clone()),
                })
                .collect(),
        }
    }

    pub fn from_free_functor(free: &FreeCategory, tgt: &AnCategory, f: &CocatHom<FreeMor, usize>) -> FunctorFile {
        FunctorFile {
            ring: tgt.ring.to_string(),
            source: SourceKind::Free,
            leaves: Some(free.leaf_budget),
            arity: Some(free.arity_budget),
            objects: object_names(&f.obj_map, &free.quiver.quiver.objects, tgt),
            components: f
                .comps
                .iter()
                .map(|(w, v)| ComponentSpec {
                    inputs: w.iter().map(|m| free_input_spec(free, m)).collect(),
                    output: terms_from_lin(v, |m| tgt.mors[m].name.clone()),
                })
                .collect(),
        }
    }
}

impl TransformationFile {
    /// A coderivation on quiver words of length ≤ 1.
    pub fn to_quiver_coder(
        &self,
        q: &DGQuiver,
        tgt: &AnCategory,
        phi: &[ObjId],
        psi: &[ObjId],
    ) -> Result<Coderivation<GenId, usize>> {
        if self.source != SourceKind::Quiver {
            return Err(Error::Parse("expected a transformation file with source \"quiver\"".into()));
        }
        self.load(q, tgt, phi, psi, |s| match s {
            InputSpec::Generator(n) => q.quiver.gen_id(n),
            InputSpec::Tree { .. } => Err(Error::Parse("a quiver transformation has generator inputs only".into())),
        })
    }

    pub fn to_free_coder(&self, free: &FreeCategory, tgt: &AnCategory, phi: &[ObjId], psi: &[ObjId]) -> Result<Coderivation<FreeMor, usize>> {
        self.load(free, tgt, phi, psi, |s| free_input(free, s))
    }

    fn load<C: Category>(
        &self,
        src: &C,
        tgt: &AnCategory,
        phi: &[ObjId],
        psi: &[ObjId],
        input: impl Fn(&InputSpec) -> Result<C::Mor>,
    ) -> Result<Coderivation<C::Mor, usize>> {
        let ring: Ring = self.ring.parse()?;
        if ring != tgt.ring {
            return Err(Error::MixedScalarKinds(format!("file ring {ring}, target ring {}", tgt.ring)));
        }
        let objects: Vec<String> = (0..src.object_count()).map(|x| src.object_name(x)).collect();
        let names: Vec<String> = tgt.mors.iter().map(|m| m.name.clone()).collect();
        let mut r = Coderivation::zero();
        for c in &self.components {
            let start = index_of(&objects, &c.start, "object")?;
            let mors = c.inputs.iter().map(&input).collect::<Result<Vec<_>>>()?;
            let end = check_composable(src, start, &mors)?;
            let w = Word { start, mors };
            let out = lin_from_terms(&ring, &c.output, |n| index_of(&names, n, "morphism"))?;
            check_degree(w.degree(src) + self.degree, &out, tgt, "transformation component")?;
            check_endpoints(&out, tgt, phi[start], psi[end], "transformation component")?;
            if r.component(&w).is_some() {
                return Err(Error::Parse("transformation component given twice".into()));
            }
            r.add_at(w, &out, &ring.one());
        }
        Ok(r)
    }

    pub fn from_free_coder(free: &FreeCategory, tgt: &AnCategory, degree: i64, r: &Coderivation<FreeMor, usize>) -> TransformationFile {
        TransformationFile {
            ring: tgt.ring.to_string(),
            source: SourceKind::Free,
            leaves: Some(free.leaf_budget),
            arity: Some(free.arity_budget),
            degree,
            components: r
                .comps
                .iter()
                .map(|(w, v)| TransformationComponent {
                    start: free.object_name(w.start),
                    inputs: w.mors.iter().map(|m| free_input_spec(free, m)).collect(),
                    output: terms_from_lin(v, |m| tgt.mors[m].name.clone()),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiver_file() -> QuiverFile {
        serde_json::from_str(
            r#"{"ring": "Z", "objects": ["X"],
                "morphisms": [{"name": "x", "src": "X", "dst": "X", "sdeg": -1},
                              {"name": "y", "src": "X", "dst": "X", "sdeg": 0}],
                "differential": [{"on": "x", "value": [{"coeff": 1, "name": "y"}]}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn quiver_round_trip_is_canonical() {
        let q = quiver_file().to_quiver().unwrap();
        let canon = QuiverFile::from_quiver(&q);
        assert_eq!(canon.to_quiver().unwrap(), q);
        let text = to_json(&canon).unwrap();
        let back: QuiverFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, canon);
        assert_eq!(to_json(&back).unwrap(), text);
    }

    #[test]
    fn bad_differential_is_rejected() {
        let mut f = quiver_file();
        f.differential[0].on = "y".into();
        f.differential[0].value[0].name = "x".into();
        assert!(f.to_quiver().is_err());
        let mut f = quiver_file();
        f.differential[0].value[0].name = "z".into();
        assert!(matches!(f.to_quiver(), Err(Error::UnknownName(_))));
    }

    #[test]
    fn category_forms_agree() {
        let toy = AnCategory::matrix_toy(Ring::Integers).unwrap();
        let file = CategoryFile::from_category(&toy);
        assert_eq!(file.to_category().unwrap(), toy);
        let text = to_json(&file).unwrap();
        let back: CategoryFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_category().unwrap(), toy);
    }

    #[test]
    fn functor_files_round_trip() {
        let q = quiver_file().to_quiver().unwrap();
        let toy = AnCategory::matrix_toy(Ring::Integers).unwrap();
        let free = FreeCategory::new(q.clone(), 3, 3).unwrap();
        let mut f1 = CocatHom::new(vec![0]);
        let a = toy.mor_id("C0>C0").unwrap();
        f1.set(vec![0], Lin::single(a, Ring::Integers.one())).unwrap();
        f1.set(vec![1], toy.b1_lin(&Lin::single(a, Ring::Integers.one())).unwrap()).unwrap();
        let file = FunctorFile::from_quiver_map(&q, &toy, &f1);
        assert_eq!(file.to_quiver_map(&q, &toy).unwrap(), f1);
        let f = crate::lift::extend_strict(&free, &toy, &f1).unwrap();
        let ffile = FunctorFile::from_free_functor(&free, &toy, &f);
        assert_eq!(ffile.to_free_functor(&free, &toy).unwrap(), f);
        let mut bad = file.clone();
        bad.components[0].output[0].name = "C0>C1".into();
        assert!(matches!(bad.to_quiver_map(&q, &toy), Err(Error::Inhomogeneous(_))));
    }
}
