//! The eight acceptance criteria, each run at exact arithmetic and reported
//! as one PASS/FAIL line with its wall time.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ainfree_core::ainfty::{check_an_category, check_an_functor, coherence_sides, m_compose, show_word, AnCategory, FunctorCategory, Tail};
use ainfree_core::free::{FreeCategory, FreeMor};
use ainfree_core::lift::{
    chain_map_defect, decompose, extend_functor, extend_strict, hom_complex, three_sum_sides, lift_chain_map, restrict_functor,
    strict_f1_explicit, verify_restriction_equivalence, LiftProblem,
};
use ainfree_core::quiver::{enumerate_words, DGQuiver, FiniteComplex, Generator, GradedMap, GradedQuiver};
use ainfree_core::random;
use ainfree_core::scalars::{Lin, Ring, SparseMatrix};
use ainfree_core::tensor::{CocatHom, Coderivation};
use ainfree_core::trees::{compositions, double_contraction_lineages, enumerate_trees, PlaneTree};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// One object, `x` of degree −1 and `y` of degree 0 with `d x = y`.
fn line_quiver() -> DGQuiver {
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
    d.images.insert(0, Lin::single(1, z.one()));
    DGQuiver::new(q, d).unwrap()
}

fn toy() -> AnCategory {
    AnCategory::matrix_toy(Ring::Integers).unwrap()
}

fn nonstrict(free: &FreeCategory, tgt: &AnCategory, rng: &mut ChaCha8Rng) -> CocatHom<FreeMor, usize> {
    let f1 = random::chain_map(rng, &free.quiver, tgt).unwrap();
    let higher = random::higher_components(rng, free, tgt, &f1.obj_map, 3, free.leaf_budget, 0.7).unwrap();
    extend_functor(free, tgt, &f1, &higher).unwrap()
}

/// Every tree with `n + 1` leaves comes from one with `n` leaves by adding a
/// leaf to a vertex or by grafting a corolla onto a leaf.
fn grafting_oracle(n: usize) -> HashSet<PlaneTree> {
    fn grow(t: &PlaneTree) -> Vec<PlaneTree> {
        match t {
            PlaneTree::Leaf => vec![PlaneTree::Node(vec![PlaneTree::Leaf, PlaneTree::Leaf])],
            PlaneTree::Node(cs) => {
                let mut out = Vec::new();
                for i in 0..=cs.len() {
                    let mut c = cs.clone();
                    c.insert(i, PlaneTree::Leaf);
                    out.push(PlaneTree::Node(c));
                }
                for i in 0..cs.len() {
                    for g in grow(&cs[i]) {
                        let mut c = cs.clone();
                        c[i] = g;
                        out.push(PlaneTree::Node(c));
                    }
                }
                out
            }
        }
    }
    let mut cur: HashSet<PlaneTree> = [PlaneTree::Leaf].into();
    for _ in 1..n {
        cur = cur.iter().flat_map(grow).collect();
    }
    cur
}

fn tree_counts() -> Outcome {
    let want = [1usize, 1, 3, 11, 45, 197, 903];
    let mut rec = vec![0usize, 1];
    for n in 2..=7 {
        rec.push(
            compositions(n)
                .iter()
                .filter(|c| c.len() >= 2)
                .map(|c| c.iter().map(|&p| rec[p]).product::<usize>())
                .sum(),
        );
    }
    for n in 1..=7 {
        let trees = enumerate_trees(n).map_err(e2s)?;
        let set: HashSet<PlaneTree> = trees.iter().cloned().collect();
        ensure(trees.len() == want[n - 1], || format!("n={n}: {} trees", trees.len()))?;
        ensure(set.len() == trees.len(), || format!("n={n}: duplicates"))?;
        ensure(rec[n] == want[n - 1], || format!("n={n}: recurrence gives {}", rec[n]))?;
        ensure(set == grafting_oracle(n), || format!("n={n}: differs from the grafting oracle"))?;
        ensure(trees.iter().all(|t| t.leaves() == n && t.validate().is_ok()), || format!("n={n}: malformed tree"))?;
    }
    Ok(format!("counts {want:?}"))
}

fn sign_cancellation() -> Outcome {
    let mut pairs = 0;
    for n in 1..=6 {
        for t in enumerate_trees(n).map_err(e2s)? {
            for ((t2, a, b), exps) in double_contraction_lineages(&t) {
                ensure(exps.len() == 2 && (exps[0] + exps[1]) % 2 == 1, || format!("{t} → {t2} edges ({a}, {b}): exponents {exps:?}"))?;
                pairs += 1;
            }
        }
    }
    ensure(pairs > 0, || "no double contractions".into())?;
    Ok(format!("{pairs} edge pairs cancel"))
}

fn free_is_ainfinity() -> Outcome {
    let z = Ring::Integers;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut with_d = 0;
    let mut instances = 0;
    let mut done = 0;
    while done < 4 {
        let objects = 1 + done % 2;
        let q = random::dg_quiver(&mut rng, &z, objects, 3 + done % 2).map_err(e2s)?;
        if done < 2 && q.d.images.is_empty() {
            continue;
        }
        with_d += usize::from(!q.d.images.is_empty());
        let free = FreeCategory::new(q, 5, 5).map_err(e2s)?;
        let report = check_an_category(&free, 4, 5).map_err(e2s)?;
        if let Some((k, c)) = report.first_failure() {
            return Err(format!("quiver {done}: k={k} at {}", c.input));
        }
        instances += report.instances();
        done += 1;
    }
    Ok(format!("4 quivers ({with_d} with d ≠ 0), {instances} instances, L=5, k≤4"))
}

fn extension() -> Outcome {
    let z = Ring::Integers;
    let tgt = toy();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut quivers = vec![line_quiver()];
    while quivers.len() < 3 {
        let q = random::dg_quiver(&mut rng, &z, 2, 3).map_err(e2s)?;
        if !q.d.images.is_empty() {
            quivers.push(q);
        }
    }
    let mut slices = 0;
    for (i, q) in quivers.into_iter().enumerate() {
        let free = FreeCategory::new(q, 5, 5).map_err(e2s)?;
        let f1 = random::chain_map(&mut rng, &free.quiver, &tgt).map_err(e2s)?;
        let f = extend_strict(&free, &tgt, &f1).map_err(e2s)?;
        let report = check_an_functor(&free, &tgt, &f, 5, 5).map_err(e2s)?;
        if let Some((k, c)) = report.first_failure() {
            return Err(format!("quiver {i}: functor equation fails at k={k} on {}", c.input));
        }
        let objs = free.quiver.quiver.objects.len();
        for x in 0..objs {
            for y in 0..objs {
                for n in 1..=5 {
                    for m in free.basis_with_leaves(x, y, n) {
                        let got = f.component(std::slice::from_ref(&m)).cloned().unwrap_or_default();
                        let want = strict_f1_explicit(&free, &tgt, &f1, &m).map_err(e2s)?;
                        ensure(got == want, || format!("quiver {i}: closed form differs at {}", free.show(&m)))?;
                        slices += 1;
                    }
                }
            }
        }
        let back = restrict_functor::<AnCategory>(&free, &f);
        ensure(back == f1, || format!("quiver {i}: restrict ∘ extend ≠ id"))?;
        ensure(extend_strict(&free, &tgt, &back).map_err(e2s)? == f, || format!("quiver {i}: extend ∘ restrict ≠ id"))?;
    }
    Ok(format!("3 quivers, {slices} tree slices, L=5"))
}

fn lifting() -> Outcome {
    let tgt = toy();
    let ring = tgt.ring.clone();
    let free = FreeCategory::new(line_quiver(), 3, 3).map_err(e2s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let phi = nonstrict(&free, &tgt, &mut rng);
    let psi = nonstrict(&free, &tgt, &mut rng);
    let a1 = FunctorCategory::new(
        &free.quiver,
        &tgt,
        vec![restrict_functor::<AnCategory>(&free, &phi), restrict_functor::<AnCategory>(&free, &psi)],
        1,
        1,
        usize::MAX,
    )
    .map_err(e2s)?;
    let (hom, _) = hom_complex(&a1, 0, 1).map_err(e2s)?;
    // P spanned by z, zB_1, z', z'B_1 for two basis elements with nonzero boundary.
    let zs: Vec<_> = (0..hom.len())
        .map(|i| (hom.degrees[i], hom.basis_element(i, &ring)))
        .filter_map(|(d, r)| {
            let rb = a1.b1(0, 1, &r).ok()?;
            (!rb.is_zero()).then_some((d, r, rb))
        })
        .take(2)
        .collect();
    ensure(zs.len() == 2, || "too few non-closed basis elements".into())?;
    let degrees: Vec<i64> = zs.iter().flat_map(|(d, _, _)| [*d, d + 1]).collect();
    let d = SparseMatrix::from_i64_rows(ring.clone(), &[vec![0, 1, 0, 0], vec![0, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 0, 0]]);
    let names = ["z", "zb", "w", "wb"].iter().map(|s| s.to_string()).collect();
    let p = FiniteComplex::new(degrees.clone(), names, d).map_err(e2s)?;
    let restricted: Vec<_> = zs.iter().flat_map(|(_, r, rb)| [r.clone(), rb.clone()]).collect();
    let words = enumerate_words(&free, None, 3, 3);
    let long: Vec<_> = words.iter().filter(|w| w.len() >= 2).cloned().collect();
    let higher: Vec<Coderivation<FreeMor, usize>> = degrees
        .iter()
        .map(|&d| random::coderivation(&mut rng, &free, &tgt, &phi.obj_map, &psi.obj_map, &long, d, 0.5))
        .collect::<ainfree_core::Result<_>>()
        .map_err(e2s)?;
    let problem = LiftProblem { free: &free, tgt: &tgt, phi: &phi, psi: &psi, p: &p, restricted: restricted.clone(), higher: higher.clone() };
    let u = lift_chain_map(&problem).map_err(e2s)?;
    if let Some(i) = chain_map_defect(&free, &tgt, &phi, &psi, &p, &u, &words).map_err(e2s)? {
        return Err(format!("du ≠ uB_1 at basis vector {i}"));
    }
    ensure(decompose(&free, &u) == (restricted, higher), || "lift does not restrict to its data".into())?;

    let mut checked = 0;
    for i in 0..20 {
        let deg = (i % 4) as i64 - 2;
        let r = random::coderivation(&mut rng, &free, &tgt, &phi.obj_map, &psi.obj_map, &words, deg, 0.6).map_err(e2s)?;
        for w in &words {
            let (lhs, rhs) = three_sum_sides(&free, &tgt, &phi, &psi, &r, &words, w).map_err(e2s)?;
            ensure(lhs == rhs, || format!("identity fails for coderivation {i} at {}", show_word(&free, w)))?;
            checked += 1;
        }
    }
    Ok(format!("rank P = {}, three-sum identity on 20 coderivations ({checked} words)", p.rank()))
}

fn equivalence() -> Outcome {
    let tgt = toy();
    let free = FreeCategory::new(line_quiver(), 4, 4).map_err(e2s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let phi = nonstrict(&free, &tgt, &mut rng);
    let psi = nonstrict(&free, &tgt, &mut rng);
    let report = verify_restriction_equivalence(&free, &tgt, &phi, &psi, 4, 4).map_err(e2s)?;
    ensure(report.passed(), || format!("{report:?}"))?;
    ensure(report.homotopy_terms > 0, || "empty homotopy".into())?;
    let pu = &report.perturbed_unit_cycles;
    ensure(pu.left_witness_terms > 0 && pu.right_witness_terms > 0, || "perturbed unit cycles need no witness".into())?;
    Ok(format!(
        "ranks {} → {}, homotopy {} terms, unit witnesses {}+{} terms, L=4",
        report.a1_rank, report.ainf_rank, report.homotopy_terms, pu.left_witness_terms, pu.right_witness_terms
    ))
}

fn coherence() -> Outcome {
    let tgt = toy();
    let z = tgt.ring.clone();
    let q = line_quiver();
    let mut rng = ChaCha8Rng::seed_from_u64(77);

    // B_1² = 0 in A_1(𝒬, 𝒜).
    let chain: Vec<_> = (0..2).map(|_| random::chain_map(&mut rng, &q, &tgt)).collect::<ainfree_core::Result<_>>().map_err(e2s)?;
    let a1 = FunctorCategory::new(&q, &tgt, chain, 1, 1, usize::MAX).map_err(e2s)?;
    let mut squares = 0;
    for (f, g) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let hom = a1.hom_space(f, g);
        for i in 0..hom.len() {
            let r = hom.basis_element(i, &z);
            let rb = a1.b1(f, g, &r).map_err(e2s)?;
            ensure(a1.b1(f, g, &rb).map_err(e2s)?.is_zero(), || format!("A_1: B_1² ≠ 0 on basis vector {i} of ({f}, {g})"))?;
            squares += 1;
        }
    }

    // B_1² = 0 in the truncated A_∞(F𝒬, 𝒜).
    let free = FreeCategory::new(q, 3, 3).map_err(e2s)?;
    let phis: Vec<_> = (0..3).map(|_| nonstrict(&free, &tgt, &mut rng)).collect();
    let fc = FunctorCategory::new(&free, &tgt, phis.clone(), 3, 3, usize::MAX).map_err(e2s)?;
    for (f, g) in [(0, 1), (1, 1)] {
        let hom = fc.hom_space(f, g);
        for i in 0..hom.len() {
            let r = hom.basis_element(i, &z);
            let rb = fc.b1(f, g, &r).map_err(e2s)?;
            ensure(fc.b1(f, g, &rb).map_err(e2s)?.is_zero(), || format!("A_∞: B_1² ≠ 0 on basis vector {i} of ({f}, {g})"))?;
            squares += 1;
        }
    }

    // (1 ⊠ B + B ⊠ 1) M = M B for n ≤ 2, m ≤ 1, k ≤ 3.
    let id = CocatHom::identity(tgt.objects.len(), 0..tgt.mors.len(), &z);
    let a_words = enumerate_words(&free, None, 3, 3);
    let b_words = enumerate_words(&tgt, None, 5, 5);
    let short: Vec<_> = b_words.iter().filter(|w| w.len() <= 3).cloned().collect();
    let mut identities = 0;
    for (dr, dt) in [(-1, 0), (0, -1)] {
        let rs: Vec<_> = (0..2)
            .map(|i| random::coderivation(&mut rng, &free, &tgt, &phis[i].obj_map, &phis[i + 1].obj_map, &a_words, dr + i as i64, 0.6))
            .collect::<ainfree_core::Result<_>>()
            .map_err(e2s)?;
        let t = random::coderivation(&mut rng, &tgt, &tgt, &id.obj_map, &id.obj_map, &short, dt, 0.6).map_err(e2s)?;
        for n in 0..=2 {
            let fs: Vec<&CocatHom<FreeMor, usize>> = phis[..=n].iter().collect();
            let rr: Vec<&Coderivation<FreeMor, usize>> = rs[..n].iter().collect();
            for tail in [None, Some(&t)] {
                if n == 0 && tail.is_none() {
                    continue;
                }
                let gs = if tail.is_some() { vec![&id, &id] } else { vec![&id] };
                let (lhs, rhs) = coherence_sides(&free, &tgt, &tgt, &fs, &rr, &gs, tail, &a_words, &b_words).map_err(e2s)?;
                let m = usize::from(tail.is_some());
                ensure(lhs == rhs, || format!("coherence fails for n={n}, m={m}, degrees ({dr}, {dt})"))?;
                ensure(!rhs.is_zero(), || format!("trivial instance n={n}, m={m}"))?;
                identities += 1;
            }
            for m in 2..=3 {
                let ts = vec![&t; m];
                let out = m_compose(&free, &tgt, &tgt, &fs, &rr, Tail::Coders(ts), &a_words).map_err(e2s)?;
                ensure(out.is_zero(), || format!("M_{{{n}{m}}} ≠ 0"))?;
            }
        }
    }
    Ok(format!("{squares} B_1² checks, {identities} coherence instances"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_ainfree")).args(args).current_dir(fixtures()).output().expect("spawn ainfree");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(e2s)?;
    let out = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (ext, res, lift) = (out("ext.json"), out("res.json"), out("lift.json"));
    let runs: Vec<(Vec<&str>, Option<&str>)> = vec![
        (vec!["trees", "5"], None),
        (vec!["trees", "4", "--contractions"], None),
        (vec!["verify", "quiver_xy.json", "--leaves", "4", "--arity", "4"], None),
        (vec!["verify", "quiver_two.json", "--mode", "free", "--leaves", "4", "--arity", "4"], None),
        (vec!["verify", "toy.json", "--mode", "an-category", "--max-k", "3"], None),
        (vec!["verify", "toy_explicit.json", "--mode", "an-category", "--max-k", "3"], None),
        (
            vec!["verify", "quiver_two.json", "--mode", "equivalence", "--category", "toy.json", "--phi", "phi_two.json", "--psi", "psi_two.json", "--leaves", "3", "--arity", "3"],
            None,
        ),
        (vec!["extend", "quiver_one.json", "map_one.json", "--category", "toy.json", "--leaves", "3", "--arity", "3", "--out", &ext], Some(&ext)),
        (vec!["restrict", "quiver_one.json", "golden_extend_one_L3.json", "--category", "toy.json", "--out", &res], Some(&res)),
        (
            vec![
                "lift", "quiver_two.json", "--category", "toy.json", "--phi", "phi_two.json", "--psi", "phi_two.json", "--transformation", "unit_two.json",
                "--leaves", "3", "--arity", "3", "--out", &lift,
            ],
            Some(&lift),
        ),
        (vec!["report", "quiver_xy.json", "--leaves", "4", "--arity", "4"], None),
    ];
    for (args, file) in &runs {
        let (c1, o1) = run_cli(args);
        let f1 = file.map(std::fs::read).transpose().map_err(e2s)?;
        let (c2, o2) = run_cli(args);
        let f2 = file.map(std::fs::read).transpose().map_err(e2s)?;
        ensure(c1 == 0, || format!("{args:?} exited {c1}"))?;
        ensure(c1 == c2 && o1 == o2 && f1 == f2, || format!("{args:?} is not deterministic"))?;
    }
    let golden = std::fs::read(fixtures().join("golden_extend_one_L3.json")).map_err(e2s)?;
    ensure(std::fs::read(&ext).map_err(e2s)? == golden, || "extend differs from the golden file".into())?;

    let garbage = out("garbage.json");
    std::fs::write(&garbage, "{ not json").map_err(e2s)?;
    let expect: Vec<(Vec<&str>, i32)> = vec![
        (vec!["verify", "toy_mutated.json", "--mode", "an-category", "--max-k", "3"], 1),
        (vec!["verify", "quiver_bad.json"], 2),
        (vec!["verify", "missing.json"], 2),
        (vec!["verify", &garbage], 2),
        (vec!["extend", "quiver_xy.json", "map_xy_not_chain.json", "--category", "toy.json"], 2),
        (
            vec!["lift", "quiver_two.json", "--category", "toy.json", "--phi", "phi_two.json", "--psi", "psi_two.json", "--transformation", "unit_two.json"],
            2,
        ),
        (vec!["trees", "0"], 2),
        (vec!["frobnicate"], 2),
    ];
    for (args, code) in &expect {
        let (c, _) = run_cli(args);
        ensure(c == *code, || format!("{args:?} exited {c}, expected {code}"))?;
    }
    Ok(format!("{} commands twice, {} mutations", runs.len(), expect.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 tree enumeration", tree_counts),
        ("2 sign cancellation", sign_cancellation),
        ("3 free category is A-infinity", free_is_ainfinity),
        ("4 extension", extension),
        ("5 lifting", lifting),
        ("6 restriction equivalence", equivalence),
        ("7 functor-category coherence", coherence),
        ("8 CLI determinism", cli_determinism),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} ({secs:.2}s): {detail}"),
            Err(why) => {
                println!("FAIL {name} ({secs:.2}s): {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
