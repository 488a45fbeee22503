use std::collections::btree_map;
use std::collections::BTreeMap;

use super::Scalar;

/// A finite formal linear combination of basis elements of type `B`.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lin<B: Ord> {
    terms: BTreeMap<B, Scalar>,
}

impl<B: Ord> Default for Lin<B> {
    fn default() -> Self {
        Lin { terms: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> Lin<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(b: B, c: Scalar) -> Self {
        let mut l = Self::zero();
        l.add_term(b, c);
        l
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &B) -> Option<&Scalar> {
        self.terms.get(b)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, B, Scalar> {
        self.terms.iter()
    }

    pub fn basis(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, b: B, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Lin<B>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (b, x) in &other.terms {
            self.add_term(b.clone(), x * c);
        }
    }

    pub fn add(&mut self, other: &Lin<B>) {
        for (b, x) in &other.terms {
            self.add_term(b.clone(), x.clone());
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Lin<B> {
        let mut out = Lin::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn negated(&self) -> Lin<B> {
        Lin {
            terms: self.terms.iter().map(|(b, x)| (b.clone(), -x.clone())).collect(),
        }
    }

    /// `self - other`.
    pub fn minus(&self, other: &Lin<B>) -> Lin<B> {
        let mut out = self.clone();
        for (b, x) in &other.terms {
            out.add_term(b.clone(), -x.clone());
        }
        out
    }

    /// Extends a basis-level map linearly.
    pub fn map_linear<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> Lin<C>) -> Lin<C> {
        let mut out = Lin::zero();
        for (b, x) in &self.terms {
            out.add_scaled(&f(b), x);
        }
        out
    }

    pub fn into_terms(self) -> BTreeMap<B, Scalar> {
        self.terms
    }
}

impl<B: Ord + Clone> FromIterator<(B, Scalar)> for Lin<B> {
    fn from_iter<I: IntoIterator<Item = (B, Scalar)>>(iter: I) -> Self {
        let mut l = Lin::zero();
        for (b, c) in iter {
            l.add_term(b, c);
        }
        l
    }
}

impl<'a, B: Ord> IntoIterator for &'a Lin<B> {
    type Item = (&'a B, &'a Scalar);
    type IntoIter = btree_map::Iter<'a, B, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}
