//! The free A_∞-category on a DG quiver, truncated by a leaf budget.
//!
//! A basis morphism is a plane tree `t` (internal arities ≥ 2) with `n`
//! leaves together with a composable word of `n` generators, placed in
//! degree `Σ deg e_i + |t|` where `|t|` counts internal vertices.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{Category, DGQuiver, GenId, ObjId};
use crate::scalars::{Lin, Ring, Scalar};
use crate::trees::{contractions, enumerate_trees, PlaneTree};

pub type TreeId = usize;

/// A basis morphism `(t, e_1 ⊗ … ⊗ e_n)`; trees are interned in the owning
/// [`FreeCategory`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreeMor {
    pub tree: TreeId,
    pub gens: Vec<GenId>,
}

struct TreeInfo {
    tree: PlaneTree,
    leaves: usize,
    internal: usize,
    /// Child tree ids of the root (empty for the leaf).
    children: Vec<TreeId>,
    /// One-edge expansions and their sign exponents.
    expansions: Vec<(TreeId, usize)>,
}

/// The free A_∞-category `F𝒬` with leaf budget `L` and arity budget.
pub struct FreeCategory {
    pub quiver: DGQuiver,
    pub leaf_budget: usize,
    pub arity_budget: usize,
    trees: Vec<TreeInfo>,
    tree_ids: HashMap<PlaneTree, TreeId>,
    graft_ids: HashMap<Vec<TreeId>, TreeId>,
    /// `paths[x][n]`: composable generator words of length `n` from `x`.
    paths: Vec<Vec<Vec<Vec<GenId>>>>,
}

fn max_arity(t: &PlaneTree) -> usize {
    match t {
        PlaneTree::Leaf => 0,
        PlaneTree::Node(cs) => cs.iter().map(max_arity).max().unwrap_or(0).max(cs.len()),
    }
}

impl FreeCategory {
    /// Builds `F𝒬` with trees of at most `leaf_budget` leaves and internal
    /// arities at most `arity_budget`.
    pub fn new(quiver: DGQuiver, leaf_budget: usize, arity_budget: usize) -> Result<Self> {
        if leaf_budget < 1 || arity_budget < 2 {
            return Err(Error::Budget("need at least one leaf and arity two".into()));
        }
        let mut all = Vec::new();
        for n in 1..=leaf_budget {
            all.extend(enumerate_trees(n)?.into_iter().filter(|t| max_arity(t) <= arity_budget));
        }
        let tree_ids: HashMap<PlaneTree, TreeId> = all.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut trees = Vec::with_capacity(all.len());
        let mut graft_ids = HashMap::new();
        for (i, t) in all.iter().enumerate() {
            let children: Vec<TreeId> = t.children().iter().map(|c| tree_ids[c]).collect();
            if !children.is_empty() {
                graft_ids.insert(children.clone(), i);
            }
            let expansions = contractions(t)
                .into_iter()
                .filter_map(|c| tree_ids.get(&c.parent).map(|&p| (p, c.beta)))
                .collect();
            trees.push(TreeInfo { tree: t.clone(), leaves: t.leaves(), internal: t.internal(), children, expansions });
        }
        let nobj = quiver.quiver.objects.len();
        let mut paths = vec![vec![Vec::new(); leaf_budget + 1]; nobj];
        for (x, px) in paths.iter_mut().enumerate() {
            px[0].push(Vec::new());
            for n in 1..=leaf_budget {
                let mut next = Vec::new();
                for p in &px[n - 1] {
                    let at = p.last().map_or(x, |&g: &GenId| quiver.gens()[g].dst);
                    for (g, gen) in quiver.gens().iter().enumerate() {
                        if gen.src == at {
                            let mut q = p.clone();
                            q.push(g);
                            next.push(q);
                        }
                    }
                }
                px[n] = next;
            }
        }
        Ok(FreeCategory { quiver, leaf_budget, arity_budget, trees, tree_ids, graft_ids, paths })
    }

    pub fn tree(&self, id: TreeId) -> &PlaneTree {
        &self.trees[id].tree
    }

    pub fn tree_id(&self, t: &PlaneTree) -> Result<TreeId> {
        self.tree_ids
            .get(t)
            .copied()
            .ok_or_else(|| Error::Budget(format!("tree {t} is outside the budget")))
    }

    pub fn tree_count(&self) -> usize {
        self.trees.len()
    }

    pub fn leaves(&self, id: TreeId) -> usize {
        self.trees[id].leaves
    }

    pub fn internal(&self, id: TreeId) -> usize {
        self.trees[id].internal
    }

    pub fn leaf_tree(&self) -> TreeId {
        0
    }

    /// The generator `g` as a morphism on the one-leaf tree.
    pub fn generator(&self, g: GenId) -> FreeMor {
        FreeMor { tree: self.leaf_tree(), gens: vec![g] }
    }

    /// Builds a basis morphism after checking leaf count and composability.
    pub fn mor(&self, t: &PlaneTree, gens: Vec<GenId>) -> Result<FreeMor> {
        let tree = self.tree_id(t)?;
        if gens.len() != t.leaves() {
            return Err(Error::InvalidTree(format!("{} generators on a tree with {} leaves", gens.len(), t.leaves())));
        }
        for w in gens.windows(2) {
            if self.quiver.gens()[w[0]].dst != self.quiver.gens()[w[1]].src {
                return Err(Error::EndpointMismatch("generators are not composable".into()));
            }
        }
        Ok(FreeMor { tree, gens })
    }

    fn gen_degree(&self, gens: &[GenId]) -> i64 {
        gens.iter().map(|&g| self.quiver.gens()[g].sdeg).sum()
    }

    /// The sign exponent of grafting: `Σ_{i<j} |t_i|·deg x_j`.
    fn graft_sign(&self, xs: &[FreeMor]) -> i64 {
        let mut e = 0i64;
        let mut right = 0i64;
        for x in xs.iter().rev() {
            e += self.internal(x.tree) as i64 * right;
            right += self.degree(x);
        }
        e
    }

    /// `b_k` for `k ≥ 2`: grafts the trees and concatenates the words.
    pub fn free_bk(&self, xs: &[FreeMor]) -> Result<Lin<FreeMor>> {
        if xs.len() < 2 {
            return Err(Error::Precondition("b_k on the free category needs k ≥ 2".into()));
        }
        if xs.len() > self.arity_budget {
            return Err(Error::Budget(format!("b_{} exceeds the arity budget", xs.len())));
        }
        for w in xs.windows(2) {
            if self.target(&w[0]) != self.source(&w[1]) {
                return Err(Error::EndpointMismatch("inputs of b_k are not composable".into()));
            }
        }
        let ids: Vec<TreeId> = xs.iter().map(|x| x.tree).collect();
        let leaves: usize = ids.iter().map(|&i| self.leaves(i)).sum();
        if leaves > self.leaf_budget {
            return Err(Error::Budget(format!("{leaves} leaves exceed the budget {}", self.leaf_budget)));
        }
        let tree = self.graft_ids[&ids];
        let gens = xs.iter().flat_map(|x| x.gens.iter().copied()).collect();
        Ok(Lin::single(FreeMor { tree, gens }, self.ring().sign(self.graft_sign(xs))))
    }

    /// `b_1`: the differential of the generators in every slot (the shift by
    /// `|t|` twists it by `(−1)^{|t|}`) plus every one-edge expansion of the
    /// tree with sign `(−1)^β`.
    pub fn free_b1(&self, x: &FreeMor) -> Lin<FreeMor> {
        let ring = self.ring();
        let info = &self.trees[x.tree];
        let mut out = Lin::zero();
        let mut right = 0i64;
        for i in (0..x.gens.len()).rev() {
            let s = ring.sign(info.internal as i64 + right);
            for (g, c) in &self.quiver.d.apply(&x.gens[i]) {
                let mut gens = x.gens.clone();
                gens[i] = *g;
                out.add_term(FreeMor { tree: x.tree, gens }, c * &s);
            }
            right += self.quiver.gens()[x.gens[i]].sdeg;
        }
        for &(p, beta) in &info.expansions {
            out.add_term(FreeMor { tree: p, gens: x.gens.clone() }, ring.sign(beta as i64));
        }
        out
    }

    /// Splits a morphism on a tree with `|t| ≥ 1` at the root: returns the
    /// pieces `y_1, …, y_k` and `ε` with `(y_1 ⊗ … ⊗ y_k) b_k = ε·y`.
    pub fn root_split(&self, y: &FreeMor) -> Option<(Vec<FreeMor>, Scalar)> {
        let info = &self.trees[y.tree];
        if info.children.is_empty() {
            return None;
        }
        let mut pieces = Vec::with_capacity(info.children.len());
        let mut at = 0;
        for &c in &info.children {
            let n = self.leaves(c);
            pieces.push(FreeMor { tree: c, gens: y.gens[at..at + n].to_vec() });
            at += n;
        }
        let eps = self.ring().sign(self.graft_sign(&pieces));
        Some((pieces, eps))
    }

    /// All basis morphisms from `x` to `y` on trees with exactly `n` leaves.
    pub fn basis_with_leaves(&self, x: ObjId, y: ObjId, n: usize) -> Vec<FreeMor> {
        if n == 0 || n > self.leaf_budget {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (id, info) in self.trees.iter().enumerate() {
            if info.leaves != n {
                continue;
            }
            for p in &self.paths[x][n] {
                if self.quiver.gens()[*p.last().unwrap()].dst == y {
                    out.push(FreeMor { tree: id, gens: p.clone() });
                }
            }
        }
        out
    }

    pub fn show(&self, m: &FreeMor) -> String {
        let names: Vec<&str> = m.gens.iter().map(|&g| self.quiver.gens()[g].name.as_str()).collect();
        if m.tree == self.leaf_tree() {
            names[0].to_string()
        } else {
            format!("{}[{}]", self.tree(m.tree), names.join(" "))
        }
    }
}

impl fmt::Debug for FreeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeCategory")
            .field("leaf_budget", &self.leaf_budget)
            .field("arity_budget", &self.arity_budget)
            .field("trees", &self.trees.len())
            .finish()
    }
}

impl Category for FreeCategory {
    type Mor = FreeMor;

    fn ring(&self) -> &Ring {
        self.quiver.ring()
    }
    fn object_count(&self) -> usize {
        self.quiver.quiver.objects.len()
    }
    fn object_name(&self, x: ObjId) -> String {
        self.quiver.quiver.objects[x].clone()
    }
    fn source(&self, m: &FreeMor) -> ObjId {
        self.quiver.gens()[m.gens[0]].src
    }
    fn target(&self, m: &FreeMor) -> ObjId {
        self.quiver.gens()[*m.gens.last().expect("nonempty word")].dst
    }
    fn degree(&self, m: &FreeMor) -> i64 {
        self.gen_degree(&m.gens) + self.internal(m.tree) as i64
    }
    fn weight(&self, m: &FreeMor) -> usize {
        m.gens.len()
    }
    fn b(&self, xs: &[FreeMor]) -> Result<Lin<FreeMor>> {
        match xs {
            [] => Err(Error::Precondition("b_0 is not defined".into())),
            [x] => Ok(self.free_b1(x)),
            _ => self.free_bk(xs),
        }
    }
    fn level(&self) -> Option<usize> {
        None
    }
    fn hom_basis(&self, x: ObjId, y: ObjId, max_weight: usize) -> Vec<FreeMor> {
        (1..=max_weight.min(self.leaf_budget)).flat_map(|n| self.basis_with_leaves(x, y, n)).collect()
    }
    fn display(&self, m: &FreeMor) -> String {
        self.show(m)
    }
}
