//! Plane rooted trees whose internal vertices have at least two children.
//!
//! Internal vertices are numbered by preorder: the root gets height 1, a
//! vertex precedes its descendants, and the vertices of a left subtree precede
//! those of every subtree to its right.  This numbering drives the sign of
//! edge contractions and, read backwards, the layer decomposition.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaneTree {
    Leaf,
    Node(Vec<PlaneTree>),
}

impl PlaneTree {
    /// The corolla with `k` inputs.
    pub fn corolla(k: usize) -> Result<PlaneTree> {
        graft(vec![PlaneTree::Leaf; k])
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlaneTree::Leaf => 1,
            PlaneTree::Node(cs) => cs.iter().map(PlaneTree::leaves).sum(),
        }
    }

    /// Number of internal vertices `|t|`.
    pub fn internal(&self) -> usize {
        match self {
            PlaneTree::Leaf => 0,
            PlaneTree::Node(cs) => 1 + cs.iter().map(PlaneTree::internal).sum::<usize>(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, PlaneTree::Leaf)
    }

    pub fn children(&self) -> &[PlaneTree] {
        match self {
            PlaneTree::Leaf => &[],
            PlaneTree::Node(cs) => cs,
        }
    }

    /// Checks that every internal vertex has at least two children.
    pub fn validate(&self) -> Result<()> {
        match self {
            PlaneTree::Leaf => Ok(()),
            PlaneTree::Node(cs) if cs.len() < 2 => Err(Error::InvalidTree(format!(
                "internal vertex with {} children",
                cs.len()
            ))),
            PlaneTree::Node(cs) => cs.iter().try_for_each(PlaneTree::validate),
        }
    }

    /// Internal vertices as child-index paths from the root, in preorder.
    pub fn internal_vertices(&self) -> Vec<Vec<usize>> {
        fn walk(t: &PlaneTree, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if let PlaneTree::Node(cs) = t {
                out.push(path.clone());
                for (i, c) in cs.iter().enumerate() {
                    path.push(i);
                    walk(c, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn subtree(&self, path: &[usize]) -> Option<&PlaneTree> {
        path.iter().try_fold(self, |t, &i| t.children().get(i))
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneTree::Leaf => write!(f, "|"),
            PlaneTree::Node(cs) => {
                write!(f, "(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for PlaneTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<PlaneTree> {
        let toks: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = parse_tree(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(Error::Parse(format!("trailing input in tree {s:?}")));
        }
        t.validate()?;
        Ok(t)
    }
}

fn parse_tree(toks: &[char], pos: &mut usize) -> Result<PlaneTree> {
    match toks.get(*pos) {
        Some('|') => {
            *pos += 1;
            Ok(PlaneTree::Leaf)
        }
        Some('(') => {
            *pos += 1;
            let mut cs = Vec::new();
            while toks.get(*pos) != Some(&')') {
                if *pos >= toks.len() {
                    return Err(Error::Parse("unterminated tree".into()));
                }
                cs.push(parse_tree(toks, pos)?);
            }
            *pos += 1;
            Ok(PlaneTree::Node(cs))
        }
        other => Err(Error::Parse(format!("unexpected {other:?} in tree"))),
    }
}

/// `(t_1 ⊔ … ⊔ t_k) · t_k`: a new root whose children are the given trees.
pub fn graft(children: Vec<PlaneTree>) -> Result<PlaneTree> {
    if children.len() < 2 {
        return Err(Error::InvalidTree(format!(
            "cannot graft {} tree(s); a vertex needs at least two children",
            children.len()
        )));
    }
    Ok(PlaneTree::Node(children))
}

/// All trees with `n` leaves, sorted by number of internal vertices and then
/// structurally.
pub fn enumerate_trees(n: usize) -> Result<Vec<PlaneTree>> {
    if n == 0 {
        return Err(Error::InvalidTree("a tree has at least one leaf".into()));
    }
    let mut memo: Vec<Vec<PlaneTree>> = vec![Vec::new(), vec![PlaneTree::Leaf]];
    for m in 2..=n {
        let mut out = Vec::new();
        for comp in compositions(m) {
            if comp.len() < 2 {
                continue;
            }
            let mut partial: Vec<Vec<PlaneTree>> = vec![Vec::new()];
            for &part in &comp {
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        memo[part].iter().map(move |t| {
                            let mut q = p.clone();
                            q.push(t.clone());
                            q
                        })
                    })
                    .collect();
            }
            out.extend(partial.into_iter().map(PlaneTree::Node));
        }
        out.sort_by(|a, b| (a.internal(), a).cmp(&(b.internal(), b)));
        memo.push(out);
    }
    Ok(memo.swap_remove(n))
}

/// All compositions of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A tree together with the heights of its internal vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedTree {
    pub tree: PlaneTree,
    /// Internal vertices (child-index paths), listed by increasing height.
    pub vertices: Vec<Vec<usize>>,
}

impl OrderedTree {
    /// Height (1-based) of the internal vertex at `path`.
    pub fn height(&self, path: &[usize]) -> Option<usize> {
        self.vertices.iter().position(|p| p == path).map(|i| i + 1)
    }
}

pub fn canonical_order(t: &PlaneTree) -> OrderedTree {
    OrderedTree { tree: t.clone(), vertices: t.internal_vertices() }
}

/// One factor `1^α ⊔ t_k ⊔ 1^β` of the layer decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Layer {
    pub alpha: usize,
    pub k: usize,
    pub beta: usize,
}

/// Layers in application order: layer 1 carries the vertex with the largest
/// height and the last layer is the root corolla.
pub fn forest_decomposition(t: &PlaneTree) -> Vec<Layer> {
    // Strand bookkeeping: leaves are replaced by their vertex as it is applied.
    let order = t.internal_vertices();
    // Position of each vertex's leftmost leaf and its arity.
    let mut info = Vec::with_capacity(order.len());
    for path in &order {
        let node = t.subtree(path).expect("vertex path");
        let left = leaves_before(t, path);
        info.push((left, node.leaves(), node.children().len()));
    }
    // strands[i] = number of original leaves covered by strand i.
    let mut strands: Vec<usize> = vec![1; t.leaves()];
    let mut layers = Vec::with_capacity(order.len());
    for &(left, width, k) in info.iter().rev() {
        let mut covered = 0;
        let mut alpha = 0;
        while covered < left {
            covered += strands[alpha];
            alpha += 1;
        }
        let mut span = 0;
        let mut end = alpha;
        while span < width {
            span += strands[end];
            end += 1;
        }
        debug_assert_eq!(end - alpha, k);
        strands.splice(alpha..end, [width]);
        layers.push(Layer { alpha, k, beta: strands.len() - alpha - 1 });
    }
    layers
}

fn leaves_before(t: &PlaneTree, path: &[usize]) -> usize {
    let mut node = t;
    let mut count = 0;
    for &i in path {
        count += node.children()[..i].iter().map(PlaneTree::leaves).sum::<usize>();
        node = &node.children()[i];
    }
    count
}

/// Rebuilds a tree from `n` leaves by applying layers in order.
pub fn replay(layers: &[Layer], n: usize) -> Result<PlaneTree> {
    let mut strands = vec![PlaneTree::Leaf; n];
    for l in layers {
        if l.alpha + l.k + l.beta != strands.len() {
            return Err(Error::InvalidTree(format!(
                "layer {l:?} does not fit {} strands",
                strands.len()
            )));
        }
        let block: Vec<PlaneTree> = strands.drain(l.alpha..l.alpha + l.k).collect();
        strands.insert(l.alpha, graft(block)?);
    }
    if strands.len() != 1 {
        return Err(Error::InvalidTree(format!("{} strands remain", strands.len())));
    }
    Ok(strands.pop().unwrap())
}

/// A tree `parent` with a distinguished internal edge whose contraction gives
/// the tree it was produced from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Contraction {
    pub parent: PlaneTree,
    /// Height in `parent` of the upper endpoint of the edge.
    pub upper: usize,
    /// Sign exponent `1 + upper`.
    pub beta: usize,
}

/// All expansions of `t` by one internal edge.
pub fn contractions(t: &PlaneTree) -> Vec<Contraction> {
    let mut out = Vec::new();
    for (idx, path) in t.internal_vertices().iter().enumerate() {
        let h = idx + 1;
        let node = t.subtree(path).expect("vertex path");
        let cs = node.children();
        let d = cs.len();
        for m in 2..d {
            for a in 0..=d - m {
                let mut new_children: Vec<PlaneTree> = cs[..a].to_vec();
                new_children.push(PlaneTree::Node(cs[a..a + m].to_vec()));
                new_children.extend_from_slice(&cs[a + m..]);
                let parent = replace_at(t, path, PlaneTree::Node(new_children));
                let upper = h + 1 + cs[..a].iter().map(PlaneTree::internal).sum::<usize>();
                out.push(Contraction { parent, upper, beta: 1 + upper });
            }
        }
    }
    out
}

fn replace_at(t: &PlaneTree, path: &[usize], new: PlaneTree) -> PlaneTree {
    match path.split_first() {
        None => new,
        Some((&i, rest)) => {
            let mut cs = t.children().to_vec();
            cs[i] = replace_at(&cs[i], rest, new);
            PlaneTree::Node(cs)
        }
    }
}

/// Contracts the edge below the internal vertex of the given height.
pub fn contract(t: &PlaneTree, upper: usize) -> Result<PlaneTree> {
    let verts = t.internal_vertices();
    let path = verts
        .get(upper.wrapping_sub(1))
        .filter(|p| !p.is_empty())
        .ok_or_else(|| Error::InvalidTree(format!("no non-root vertex of height {upper}")))?;
    let (&last, parent_path) = path.split_last().unwrap();
    let parent = t.subtree(parent_path).unwrap();
    let mut cs: Vec<PlaneTree> = parent.children()[..last].to_vec();
    cs.extend_from_slice(parent.children()[last].children());
    cs.extend_from_slice(&parent.children()[last + 1..]);
    Ok(replace_at(t, parent_path, PlaneTree::Node(cs)))
}

/// Every pair of distinct contractible edges `{e1, e2}` in a tree `t''`
/// reachable from `t` by two expansions, recorded once per lineage.
///
/// A lineage `t → t' → t''` contributes `(t'', {a, b}) ↦ β(t', e) + β(t'', e')`
/// where the heights `a`, `b` are those of both edge endpoints in `t''`.
pub fn double_contraction_lineages(
    t: &PlaneTree,
) -> BTreeMap<(PlaneTree, usize, usize), Vec<usize>> {
    let mut out: BTreeMap<(PlaneTree, usize, usize), Vec<usize>> = BTreeMap::new();
    for first in contractions(t) {
        for second in contractions(&first.parent) {
            let moved = if first.upper < second.upper { first.upper } else { first.upper + 1 };
            let (a, b) = (moved.min(second.upper), moved.max(second.upper));
            out.entry((second.parent.clone(), a, b))
                .or_default()
                .push(first.beta + second.beta);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn tree(s: &str) -> PlaneTree {
        s.parse().unwrap()
    }

    /// Independent generator: every tree with `n + 1` leaves arises from one
    /// with `n` leaves by adding a leaf to a vertex or splitting a leaf.
    fn grow_oracle(n: usize) -> HashSet<PlaneTree> {
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

    #[test]
    fn counts_match_oracle_and_recurrence() {
        let want = [1usize, 1, 3, 11, 45, 197, 903];
        let mut s = vec![0usize, 1];
        for n in 2..=7 {
            let v: usize = compositions(n)
                .iter()
                .filter(|c| c.len() >= 2)
                .map(|c| c.iter().map(|&p| s[p]).product::<usize>())
                .sum();
            s.push(v);
        }
        for n in 1..=7 {
            let trees = enumerate_trees(n).unwrap();
            assert_eq!(trees.len(), want[n - 1]);
            assert_eq!(s[n], want[n - 1]);
            let set: HashSet<_> = trees.iter().cloned().collect();
            assert_eq!(set.len(), trees.len());
            assert_eq!(set, grow_oracle(n));
        }
        assert!(enumerate_trees(0).is_err());
    }

    #[test]
    fn enumeration_is_sorted_by_size() {
        let t = enumerate_trees(4).unwrap();
        assert!(t.windows(2).all(|w| (w[0].internal(), &w[0]) < (w[1].internal(), &w[1])));
        assert_eq!(t[0], PlaneTree::corolla(4).unwrap());
    }

    #[test]
    fn grafting() {
        let t2 = graft(vec![PlaneTree::Leaf, PlaneTree::Leaf]).unwrap();
        assert_eq!(t2.to_string(), "(| |)");
        assert_eq!(PlaneTree::corolla(3).unwrap().internal(), 1);
        let comb = graft(vec![t2.clone(), PlaneTree::Leaf]).unwrap();
        assert_eq!((comb.internal(), comb.leaves()), (2, 3));
        assert!(enumerate_trees(3).unwrap().contains(&comb));
        assert!(graft(vec![t2]).is_err());
    }

    #[test]
    fn text_round_trip() {
        for n in 1..=5 {
            for t in enumerate_trees(n).unwrap() {
                assert_eq!(tree(&t.to_string()), t);
            }
        }
        assert!("(|)".parse::<PlaneTree>().is_err());
        assert!("(| |".parse::<PlaneTree>().is_err());
    }

    #[test]
    fn heights_are_preorder() {
        let o = canonical_order(&tree("((| |) (| |))"));
        assert_eq!(o.height(&[]), Some(1));
        assert_eq!(o.height(&[0]), Some(2));
        assert_eq!(o.height(&[1]), Some(3));
        let o = canonical_order(&tree("(| | |)"));
        assert_eq!(o.vertices, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn forest_decomposition_examples() {
        assert_eq!(forest_decomposition(&PlaneTree::Leaf), vec![]);
        assert_eq!(
            forest_decomposition(&PlaneTree::corolla(4).unwrap()),
            vec![Layer { alpha: 0, k: 4, beta: 0 }]
        );
        assert_eq!(
            forest_decomposition(&tree("((| |) |)")),
            vec![Layer { alpha: 0, k: 2, beta: 1 }, Layer { alpha: 0, k: 2, beta: 0 }]
        );
        assert_eq!(
            forest_decomposition(&tree("((| |) (| |))")),
            vec![
                Layer { alpha: 2, k: 2, beta: 0 },
                Layer { alpha: 0, k: 2, beta: 1 },
                Layer { alpha: 0, k: 2, beta: 0 }
            ]
        );
    }

    #[test]
    fn replay_is_identity() {
        for n in 1..=6 {
            for t in enumerate_trees(n).unwrap() {
                let layers = forest_decomposition(&t);
                assert_eq!(layers.len(), t.internal());
                assert_eq!(replay(&layers, n).unwrap(), t);
            }
        }
    }

    #[test]
    fn contraction_examples() {
        assert!(contractions(&PlaneTree::corolla(2).unwrap()).is_empty());
        let cs = contractions(&PlaneTree::corolla(3).unwrap());
        let parents: Vec<String> = cs.iter().map(|c| c.parent.to_string()).collect();
        assert_eq!(parents, vec!["((| |) |)", "(| (| |))"]);
        assert!(cs.iter().all(|c| c.upper == 2 && c.beta == 3));
    }

    #[test]
    fn contractions_invert_and_are_complete() {
        for n in 1..=6 {
            let all = enumerate_trees(n).unwrap();
            for t in &all {
                let cs = contractions(t);
                for c in &cs {
                    assert_eq!(c.parent.internal(), t.internal() + 1);
                    assert_eq!(c.parent.leaves(), n);
                    assert_eq!(&contract(&c.parent, c.upper).unwrap(), t);
                }
                // Completeness: every (t', e) contracting to t appears.
                let mut expected = 0;
                for p in all.iter().filter(|p| p.internal() == t.internal() + 1) {
                    for h in 2..=p.internal() {
                        if &contract(p, h).unwrap() == t {
                            expected += 1;
                            assert!(cs.iter().any(|c| &c.parent == p && c.upper == h));
                        }
                    }
                }
                assert_eq!(expected, cs.len());
            }
        }
    }

    #[test]
    fn double_contractions_cancel() {
        for n in 1..=6 {
            for t in enumerate_trees(n).unwrap() {
                for (key, signs) in double_contraction_lineages(&t) {
                    assert_eq!(signs.len(), 2, "{key:?}");
                    assert_eq!((signs[0] + signs[1]) % 2, 1, "{key:?}");
                }
            }
        }
    }
}
