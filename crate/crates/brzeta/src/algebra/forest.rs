use std::fmt;

use super::LocalityAlgebra;
use crate::{Error, Result};

/// Rooted tree with unordered children, kept in canonical (sorted) order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree<D> {
    pub decoration: D,
    children: Vec<Tree<D>>,
}

/// Multiset of trees, kept sorted; the empty forest is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Forest<D> {
    trees: Vec<Tree<D>>,
}

impl<D: Clone + Ord + fmt::Debug> Tree<D> {
    pub fn new(decoration: D, mut children: Vec<Tree<D>>) -> Self {
        children.sort();
        Tree { decoration, children }
    }

    pub fn leaf(decoration: D) -> Self {
        Tree { decoration, children: Vec::new() }
    }

    /// Chain with the first decoration at the root.
    pub fn ladder(decorations: &[D]) -> Option<Self> {
        let (last, rest) = decorations.split_last()?;
        let mut t = Tree::leaf(last.clone());
        for d in rest.iter().rev() {
            t = Tree::new(d.clone(), vec![t]);
        }
        Some(t)
    }

    pub fn children(&self) -> &[Tree<D>] {
        &self.children
    }

    pub fn children_forest(&self) -> Forest<D> {
        Forest { trees: self.children.clone() }
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.vertex_count()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Decorations in preorder.
    pub fn decorations(&self) -> Vec<D> {
        let mut out = vec![self.decoration.clone()];
        for c in &self.children {
            out.extend(c.decorations());
        }
        out
    }

    pub fn map<E: Clone + Ord + fmt::Debug, F: Fn(&D) -> E + Copy>(&self, f: F) -> Tree<E> {
        Tree::new(f(&self.decoration), self.children.iter().map(|c| c.map(f)).collect())
    }
}

impl<D: Clone + Ord + fmt::Debug> Forest<D> {
    pub fn empty() -> Self {
        Forest { trees: Vec::new() }
    }

    pub fn new(mut trees: Vec<Tree<D>>) -> Self {
        trees.sort();
        Forest { trees }
    }

    pub fn trees(&self) -> &[Tree<D>] {
        &self.trees
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn product(&self, other: &Forest<D>) -> Forest<D> {
        let mut t = self.trees.clone();
        t.extend(other.trees.iter().cloned());
        Forest::new(t)
    }

    pub fn vertex_count(&self) -> usize {
        self.trees.iter().map(|t| t.vertex_count()).sum()
    }

    pub fn depth(&self) -> usize {
        self.trees.iter().map(|t| t.depth()).max().unwrap_or(0)
    }

    pub fn decorations(&self) -> Vec<D> {
        self.trees.iter().flat_map(|t| t.decorations()).collect()
    }

    pub fn map<E: Clone + Ord + fmt::Debug, F: Fn(&D) -> E + Copy>(&self, f: F) -> Forest<E> {
        Forest::new(self.trees.iter().map(|t| t.map(f)).collect())
    }

    /// All decorations pairwise independent.
    pub fn is_proper<A: LocalityAlgebra<Elem = D>>(&self, alg: &A) -> bool
    where
        D: fmt::Display,
    {
        self.check_proper(alg).is_ok()
    }

    pub fn check_proper<A: LocalityAlgebra<Elem = D>>(&self, alg: &A) -> Result<()>
    where
        D: fmt::Display,
    {
        let d = self.decorations();
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                if !alg.independent(&d[i], &d[j]) {
                    return Err(Error::LocalityViolation { left: d[i].to_string(), right: d[j].to_string() });
                }
            }
        }
        Ok(())
    }
}

impl<D: Clone + Ord + fmt::Debug> From<Tree<D>> for Forest<D> {
    fn from(t: Tree<D>) -> Self {
        Forest { trees: vec![t] }
    }
}

/// Grafting `B₊^ω`: a new root decorated by `ω` above the trees of `f`.
pub fn b_plus<A: LocalityAlgebra>(omega: &A::Elem, f: &Forest<A::Elem>, alg: &A) -> Result<Tree<A::Elem>> {
    for d in f.decorations() {
        if !alg.independent(omega, &d) {
            return Err(Error::LocalityViolation { left: omega.to_string(), right: d.to_string() });
        }
    }
    Ok(Tree::new(omega.clone(), f.trees.clone()))
}

impl<D: fmt::Display> fmt::Display for Tree<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({})", self.decoration)?;
        if !self.children.is_empty() {
            write!(f, "[")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl<D: fmt::Display> fmt::Display for Forest<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.trees.is_empty() {
            return write!(f, "empty");
        }
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{EsAlgebra, EsLetter};

    #[test]
    fn grafting() {
        let a = EsLetter::int(1, 0);
        let b = EsLetter::int(2, 0);
        let c = EsLetter::int(3, 0);
        let t = b_plus(&a, &Forest::empty(), &EsAlgebra).unwrap();
        assert_eq!(t.vertex_count(), 1);
        let f = Forest::new(vec![Tree::leaf(b.clone()), Tree::leaf(a.clone())]);
        let corolla = b_plus(&c, &f, &EsAlgebra).unwrap();
        assert_eq!(corolla.children().len(), 2);
        assert!(b_plus(&a, &Forest::from(Tree::leaf(a.clone())), &EsAlgebra).is_err());
    }

    #[test]
    fn canonical_order_ignores_child_order() {
        let x = Tree::new(EsLetter::int(1, 0), vec![Tree::leaf(EsLetter::int(2, 1)), Tree::leaf(EsLetter::int(3, 2))]);
        let y = Tree::new(EsLetter::int(1, 0), vec![Tree::leaf(EsLetter::int(3, 2)), Tree::leaf(EsLetter::int(2, 1))]);
        assert_eq!(x, y);
        assert_eq!(x.depth(), 2);
    }
}
