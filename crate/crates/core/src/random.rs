//! Seeded random instances for property tests and benchmarks: small DG
//! quivers, chain maps into a finite target, higher functor components and
//! homogeneous coderivations.

use rand::Rng;

use crate::ainfty::AnCategory;
use crate::error::Result;
use crate::free::{FreeCategory, FreeMor};
use crate::quiver::{enumerate_words, Category, DGQuiver, GenId, Generator, GradedMap, GradedQuiver, ObjId, Word};
use crate::scalars::{Lin, Ring};
use crate::tensor::{CocatHom, Coderivation};

/// A quiver with `objects` objects and `gens` generators of shifted degree
/// in `[-2, 2]`, whose differential pairs some generators `g ↦ ±h`.
pub fn dg_quiver(rng: &mut impl Rng, ring: &Ring, objects: usize, gens: usize) -> Result<DGQuiver> {
    let objects = objects.max(1);
    let mut list = Vec::with_capacity(gens);
    for i in 0..gens {
        list.push(Generator {
            name: format!("g{i}"),
            src: rng.gen_range(0..objects),
            dst: rng.gen_range(0..objects),
            sdeg: rng.gen_range(-2..=2),
        });
    }
    // Pair g with a later h of the same endpoints and degree one higher.
    let mut used = vec![false; gens];
    let mut d = GradedMap::new(1);
    for g in 0..gens {
        if used[g] || !rng.gen_bool(0.6) {
            continue;
        }
        if let Some(h) = (0..gens).find(|&h| {
            !used[h] && h != g && list[h].src == list[g].src && list[h].dst == list[g].dst && list[h].sdeg == list[g].sdeg + 1
        }) {
            used[g] = true;
            used[h] = true;
            let c = if rng.gen_bool(0.5) { ring.one() } else { -ring.one() };
            d.images.insert(g, Lin::single(h, c));
        }
    }
    let names = (0..objects).map(|x| format!("X{x}")).collect();
    DGQuiver::new(GradedQuiver::new(ring.clone(), names, list)?, d)
}

/// A random combination of the target's basis morphisms `x → y` of degree `deg`.
pub fn element(rng: &mut impl Rng, tgt: &AnCategory, x: ObjId, y: ObjId, deg: i64) -> Lin<usize> {
    (0..tgt.mors.len())
        .filter(|&m| tgt.mors[m].src == x && tgt.mors[m].dst == y && tgt.mors[m].sdeg == deg)
        .filter_map(|m| {
            let c = rng.gen_range(-2..=2);
            (c != 0).then(|| (m, tgt.ring.from_i64(c)))
        })
        .collect()
}

/// A random cycle `x → y` of degree `deg`: a boundary plus, in degree −1 on
/// an endomorphism object, a multiple of the unit.
pub fn cycle(rng: &mut impl Rng, tgt: &AnCategory, x: ObjId, y: ObjId, deg: i64) -> Result<Lin<usize>> {
    let mut v = tgt.b1_lin(&element(rng, tgt, x, y, deg - 1))?;
    if deg == -1 && x == y {
        if let Ok(u) = tgt.unit(x) {
            v.add_scaled(u, &tgt.ring.from_i64(rng.gen_range(-2..=2)));
        }
    }
    Ok(v)
}

/// A random chain map from the quiver to the target, preserving degrees.
pub fn chain_map(rng: &mut impl Rng, q: &DGQuiver, tgt: &AnCategory) -> Result<CocatHom<GenId, usize>> {
    let obj_map: Vec<ObjId> = (0..q.quiver.objects.len()).map(|_| rng.gen_range(0..tgt.objects.len())).collect();
    let mut f = CocatHom::new(obj_map.clone());
    let targets: Vec<GenId> = q.d.images.values().flat_map(|v| v.basis().cloned().collect::<Vec<_>>()).collect();
    for (g, gen) in q.gens().iter().enumerate() {
        let (x, y) = (obj_map[gen.src], obj_map[gen.dst]);
        if let Some(dg) = q.d.images.get(&g) {
            let v = element(rng, tgt, x, y, gen.sdeg);
            let vb = tgt.b1_lin(&v)?;
            // d g = c h with c = ±1, so f(h) = c·f(g) b_1.
            for (h, c) in dg {
                f.set(vec![*h], vb.scaled(c))?;
            }
            f.set(vec![g], v)?;
        } else if !targets.contains(&g) {
            f.set(vec![g], cycle(rng, tgt, x, y, gen.sdeg)?)?;
        }
    }
    Ok(f)
}

/// Random components `f_k` for `2 ≤ k ≤ max_len` on the free category's words
/// of weight ≤ `max_weight`, each of degree `deg w`.
pub fn higher_components(
    rng: &mut impl Rng,
    free: &FreeCategory,
    tgt: &AnCategory,
    obj_map: &[ObjId],
    max_len: usize,
    max_weight: usize,
    density: f64,
) -> Result<CocatHom<FreeMor, usize>> {
    let mut f = CocatHom::new(obj_map.to_vec());
    for w in enumerate_words(free, None, max_len, max_weight) {
        if w.len() < 2 || !rng.gen_bool(density) {
            continue;
        }
        let end = w.end(free)?;
        let v = element(rng, tgt, obj_map[w.start], obj_map[end], w.degree(free));
        if !v.is_zero() {
            f.set(w.mors, v)?;
        }
    }
    Ok(f)
}

/// A random coderivation `φ → ψ` of degree `deg` on the given words.
#[allow(clippy::too_many_arguments)]
pub fn coderivation<M: Ord + Clone>(
    rng: &mut impl Rng,
    src: &impl Category<Mor = M>,
    tgt: &AnCategory,
    phi: &[ObjId],
    psi: &[ObjId],
    words: &[Word<M>],
    deg: i64,
    density: f64,
) -> Result<Coderivation<M, usize>> {
    let mut r = Coderivation::zero();
    for w in words {
        if !rng.gen_bool(density) {
            continue;
        }
        let end = w.end(src)?;
        let v = element(rng, tgt, phi[w.start], psi[end], w.degree(src) + deg);
        r.add_at(w.clone(), &v, &tgt.ring.one());
    }
    Ok(r)
}
