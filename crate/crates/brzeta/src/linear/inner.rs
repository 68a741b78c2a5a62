use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::matrix::positive_definite;
use super::LinearForm;
use crate::numerics::parse_rational;
use crate::{Error, Result};

/// Symmetric rational inner product: identity plus finitely many overrides.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InnerProduct {
    // keyed with i <= j
    overrides: BTreeMap<(u32, u32), Rational>,
}

#[derive(Serialize, Deserialize)]
struct FileFormat {
    entries: Vec<(u32, u32, String)>,
}

impl InnerProduct {
    /// The canonical inner product.
    pub fn identity() -> Self {
        InnerProduct::default()
    }

    pub fn is_identity(&self) -> bool {
        self.overrides.is_empty()
    }

    /// Builds from `(i, j, value)` entries, validating symmetry and definiteness.
    pub fn from_entries<I: IntoIterator<Item = (u32, u32, Rational)>>(entries: I) -> Result<Self> {
        let mut overrides = BTreeMap::new();
        for (i, j, v) in entries {
            if i == 0 || j == 0 {
                return Err(Error::Invalid("variable indices start at 1".into()));
            }
            let key = (i.min(j), i.max(j));
            if let Some(old) = overrides.get(&key) {
                if *old != v {
                    return Err(Error::Invalid(format!("asymmetric entries for ({i},{j})")));
                }
            }
            overrides.insert(key, v);
        }
        overrides.retain(|(i, j), v| !(i == j && *v == 1) && !(i != j && *v == 0));
        let q = InnerProduct { overrides };
        q.validate()?;
        Ok(q)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: FileFormat = serde_json::from_str(text)?;
        let mut entries = Vec::new();
        for (i, j, v) in f.entries {
            entries.push((i, j, parse_rational(&v)?));
        }
        InnerProduct::from_entries(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        InnerProduct::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let f = FileFormat { entries: self.overrides.iter().map(|((i, j), v)| (*i, *j, v.to_string())).collect() };
        serde_json::to_string(&f).expect("inner product serialises")
    }

    pub fn entry(&self, i: u32, j: u32) -> Rational {
        match self.overrides.get(&(i.min(j), i.max(j))) {
            Some(v) => v.clone(),
            None => Rational::from(u32::from(i == j)),
        }
    }

    /// Variables whose rows differ from the identity.
    pub fn touched(&self) -> BTreeSet<u32> {
        self.overrides.keys().flat_map(|(i, j)| [*i, *j]).collect()
    }

    fn validate(&self) -> Result<()> {
        let vars: Vec<u32> = self.touched().into_iter().collect();
        let m: Vec<Vec<Rational>> = vars.iter().map(|i| vars.iter().map(|j| self.entry(*i, *j)).collect()).collect();
        if positive_definite(&m) {
            Ok(())
        } else {
            Err(Error::NotPositiveDefinite(format!("on variables {vars:?}")))
        }
    }
}

/// `Q(a, b)`, exact.
pub fn inner(q: &InnerProduct, a: &LinearForm, b: &LinearForm) -> Rational {
    let mut acc = Rational::new();
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    for (i, c) in small.iter() {
        let d = large.coeff(i);
        if d != 0 {
            acc += Rational::from(c * &d);
        }
    }
    for ((i, j), v) in &q.overrides {
        let delta = Rational::from(v - u32::from(i == j));
        let mut t = Rational::from(&a.coeff(*i) * &b.coeff(*j));
        if i != j {
            t += Rational::from(&a.coeff(*j) * &b.coeff(*i));
        }
        if t != 0 {
            acc += delta * t;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    fn identity_examples() {
        let q = InnerProduct::identity();
        let z1 = LinearForm::var(1);
        let z2 = LinearForm::var(2);
        assert_eq!(inner(&q, &z1, &z2), 0);
        assert_eq!(inner(&q, &(&z1 + &z2), &(&z1 - &z2)), 0);
        assert_eq!(inner(&q, &z1, &(&z1 + &z2)), 1);
    }

    #[test]
    fn custom_file() {
        let q = InnerProduct::from_json(r#"{"entries": [[1, 2, "1/2"]]}"#).unwrap();
        assert_eq!(inner(&q, &LinearForm::var(1), &LinearForm::var(2)), rat(1, 2));
        assert_eq!(inner(&q, &LinearForm::var(2), &LinearForm::var(1)), rat(1, 2));
        let back = InnerProduct::from_json(&q.to_json()).unwrap();
        assert_eq!(back, q);
        assert!(matches!(InnerProduct::from_json(r#"{"entries": [[1, 2, "2"]]}"#), Err(Error::NotPositiveDefinite(_))));
    }
}
