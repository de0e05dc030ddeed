//! JSON forms of elements, basis elements and quotient elements.
//!
//! An element is `{"n": 2, "terms": [{"matrix": [[1,0],[0,1]], "coeff": "1"}, ...]}`
//! with terms listed leading (lex-largest) first and coefficients in the
//! text form of [`LaurentPoly`]. Basis elements add `"index"` and `"h"`,
//! quotient elements add `"det_shift"`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::canon::{CanonElement, Coords};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::ExpMatrix;
use crate::slquotient::SLElement;

#[derive(Serialize, Deserialize)]
struct Term {
    matrix: ExpMatrix,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    n: usize,
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct CanonRepr {
    n: usize,
    terms: Vec<Term>,
    index: ExpMatrix,
    h: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct SLRepr {
    n: usize,
    terms: Vec<Term>,
    det_shift: u32,
}

fn to_terms<'a, I>(terms: I) -> Vec<Term>
where
    I: DoubleEndedIterator<Item = (&'a ExpMatrix, &'a LaurentPoly)>,
{
    terms
        .rev()
        .map(|(a, c)| Term {
            matrix: a.clone(),
            coeff: c.to_string(),
        })
        .collect()
}

fn from_terms(n: usize, terms: Vec<Term>) -> Result<Vec<(ExpMatrix, LaurentPoly)>> {
    let mut seen = std::collections::BTreeSet::new();
    terms
        .into_iter()
        .map(|t| {
            if t.matrix.n() != n {
                return Err(Error::SizeMismatch {
                    left: n,
                    right: t.matrix.n(),
                });
            }
            if !seen.insert(t.matrix.clone()) {
                return Err(Error::Malformed(format!(
                    "matrix {} listed twice",
                    t.matrix
                )));
            }
            Ok((t.matrix, t.coeff.parse()?))
        })
        .collect()
}

fn element_from(n: usize, terms: Vec<Term>) -> Result<Element> {
    if n == 0 {
        return Err(Error::Malformed("n must be positive".into()));
    }
    Element::from_terms(n, from_terms(n, terms)?)
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            n: self.n(),
            terms: to_terms(self.terms()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ElementRepr::deserialize(d)?;
        element_from(r.n, r.terms).map_err(serde::de::Error::custom)
    }
}

impl Serialize for CanonElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CanonRepr {
            n: self.index.n(),
            terms: to_terms(self.element.terms()),
            index: self.index.clone(),
            h: to_terms(self.h.iter()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CanonElement {
    /// The element is rebuilt from `index` and `h`; `terms` must agree with it.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CanonRepr::deserialize(d)?;
        let parse = || -> Result<CanonElement> {
            let terms = element_from(r.n, r.terms)?;
            if r.index.n() != r.n {
                return Err(Error::SizeMismatch {
                    left: r.n,
                    right: r.index.n(),
                });
            }
            let mut coords: Coords = from_terms(r.n, r.h)?.into_iter().collect();
            if coords.contains_key(&r.index) {
                return Err(Error::Malformed("h lists the index itself".into()));
            }
            coords.insert(r.index.clone(), LaurentPoly::one());
            let b = CanonElement::from_coords(r.index, coords);
            if b.element != terms {
                return Err(Error::Malformed("terms disagree with index and h".into()));
            }
            Ok(b)
        };
        parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for SLElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SLRepr {
            n: self.n(),
            terms: to_terms(self.rep.terms()),
            det_shift: self.shift,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SLElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SLRepr::deserialize(d)?;
        let rep = element_from(r.n, r.terms).map_err(serde::de::Error::custom)?;
        Ok(SLElement {
            rep,
            shift: r.det_shift,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::CanonicalBasis;

    #[test]
    fn element_schema() {
        let cb = CanonicalBasis::new(2);
        let det = cb.algebra().det();
        let json = serde_json::to_string(&det).unwrap();
        assert_eq!(
            json,
            r#"{"n":2,"terms":[{"matrix":[[1,0],[0,1]],"coeff":"1"},{"matrix":[[0,1],[1,0]],"coeff":"-q^2"}]}"#
        );
        let back: Element = serde_json::from_str(&json).unwrap();
        assert_eq!(back, det);
    }

    #[test]
    fn canon_round_trip() {
        let cb = CanonicalBasis::new(2);
        let b = cb.basis_element(&"1,1;1,1".parse().unwrap()).unwrap();
        let json = serde_json::to_value(&*b).unwrap();
        assert!(json.get("index").is_some() && json.get("h").is_some());
        let back: CanonElement = serde_json::from_value(json.clone()).unwrap();
        assert_eq!(back, *b);
        let mut broken = json;
        broken["h"] = serde_json::json!([]);
        assert!(serde_json::from_value::<CanonElement>(broken).is_err());
    }

    #[test]
    fn sl_round_trip() {
        let x = SLElement {
            rep: Element::generator(2, crate::matrix::Letter::new(1, 1)),
            shift: 1,
        };
        let json = serde_json::to_value(&x).unwrap();
        assert_eq!(json["det_shift"], 1);
        assert_eq!(serde_json::from_value::<SLElement>(json).unwrap(), x);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            r#"{"n":2,"terms":[{"matrix":[[1,0]],"coeff":"1"}]}"#,
            r#"{"n":2,"terms":[{"matrix":[[1,0,0],[0,1,0],[0,0,0]],"coeff":"1"}]}"#,
            r#"{"n":2,"terms":[{"matrix":[[1,0],[0,1]],"coeff":"q^"}]}"#,
            r#"{"n":2,"terms":[{"matrix":[[1,0],[0,1]],"coeff":"1"},{"matrix":[[1,0],[0,1]],"coeff":"1"}]}"#,
            r#"{"n":0,"terms":[]}"#,
        ];
        for s in bad {
            assert!(serde_json::from_str::<Element>(s).is_err(), "{s}");
        }
    }
}
