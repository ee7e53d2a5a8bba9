//! Faithful / full / essentially surjective decisions, always with witnesses.

use rayon::prelude::*;

use super::{Category, Cell, DynCategory, Functor};

/// Outcome of a bounded decision. `within_bound` is set when some
/// enumeration was truncated, so `holds` is only certified up to the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<W> {
    pub holds: bool,
    pub witness: Option<W>,
    pub within_bound: bool,
}

impl<W> Verdict<W> {
    fn from_search(found: Option<W>, within_bound: bool) -> Self {
        Self {
            holds: found.is_none(),
            witness: found,
            within_bound,
        }
    }
}

/// Two distinct parallel morphisms with the same image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaithfulWitness<M1, M2> {
    pub f: M1,
    pub g: M1,
    pub image: M2,
}

/// A morphism `F x → F y` that is not the image of any `x → y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullWitness<O1, M2> {
    pub x: O1,
    pub y: O1,
    pub missed: M2,
}

/// A target object not isomorphic to any image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssSurjWitness<O2> {
    pub object: O2,
}

/// Constructive essential surjectivity: return a preimage `x` and an iso
/// `F x → t`, or `None` when there is none. The iso is re-checked.
pub type Lift<'a, O1, O2, M2> = dyn Fn(&O2) -> Option<(O1, M2)> + Send + Sync + 'a;

fn pairs<O: Clone>(objs: &[O]) -> Vec<(O, O)> {
    let mut out = Vec::with_capacity(objs.len() * objs.len());
    for x in objs {
        for y in objs {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}

pub fn is_faithful<O1: Cell, M1: Cell, O2: Cell, M2: Cell>(
    f: &Functor<O1, M1, O2, M2>,
    bound: usize,
) -> Verdict<FaithfulWitness<M1, M2>> {
    let objs = f.source.objects(bound);
    let found = pairs(&objs.items).into_par_iter().find_map_first(|(x, y)| {
        let homs = f.source.hom(&x, &y);
        let images: Vec<M2> = homs.iter().map(|m| f.mor(m)).collect();
        for i in 0..homs.len() {
            for j in i + 1..homs.len() {
                if images[i] == images[j] {
                    return Some(FaithfulWitness {
                        f: homs[i].clone(),
                        g: homs[j].clone(),
                        image: images[i].clone(),
                    });
                }
            }
        }
        None
    });
    Verdict::from_search(found, !objs.complete)
}

pub fn is_full<O1: Cell, M1: Cell, O2: Cell, M2: Cell>(
    f: &Functor<O1, M1, O2, M2>,
    bound: usize,
) -> Verdict<FullWitness<O1, M2>> {
    let objs = f.source.objects(bound);
    let found = pairs(&objs.items).into_par_iter().find_map_first(|(x, y)| {
        let images: std::collections::HashSet<M2> =
            f.source.hom(&x, &y).iter().map(|m| f.mor(m)).collect();
        f.target
            .hom(&f.obj(&x), &f.obj(&y))
            .into_iter()
            .find(|m| !images.contains(m))
            .map(|missed| FullWitness { x, y, missed })
    });
    Verdict::from_search(found, !objs.complete)
}

/// Blind search: every target object up to `bound` must be isomorphic to
/// the image of some source object up to `bound`.
pub fn is_essentially_surjective<O1: Cell, M1: Cell, O2: Cell, M2: Cell>(
    f: &Functor<O1, M1, O2, M2>,
    bound: usize,
) -> Verdict<EssSurjWitness<O2>> {
    let src = f.source.objects(bound);
    let images: Vec<(O1, O2)> = src.items.iter().map(|x| (x.clone(), f.obj(x))).collect();
    let target = f.target.clone();
    let lift = move |t: &O2| {
        images
            .iter()
            .find_map(|(x, fx)| target.find_isomorphism(fx, t).map(|(i, _)| (x.clone(), i)))
    };
    let mut v = is_essentially_surjective_with(f, bound, &lift);
    v.within_bound |= !src.complete;
    v
}

/// Constructive variant: each target object is lifted by `lift`, and the
/// returned iso is verified to run `F x → t` and to be invertible.
pub fn is_essentially_surjective_with<O1: Cell, M1: Cell, O2: Cell, M2: Cell>(
    f: &Functor<O1, M1, O2, M2>,
    bound: usize,
    lift: &Lift<'_, O1, O2, M2>,
) -> Verdict<EssSurjWitness<O2>> {
    let targets = f.target.objects(bound);
    let found = targets.items.par_iter().find_map_first(|t| {
        let ok = lift(t).is_some_and(|(x, iso)| {
            f.source.contains(&x)
                && f.target.dom(&iso) == f.obj(&x)
                && f.target.cod(&iso) == *t
                && f.target.is_iso(&iso)
        });
        (!ok).then(|| EssSurjWitness { object: t.clone() })
    });
    Verdict::from_search(found, !targets.complete)
}

pub fn find_isomorphism<O: Cell, M: Cell>(
    cat: &DynCategory<O, M>,
    x: &O,
    y: &O,
) -> Option<(M, M)> {
    cat.find_isomorphism(x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EquivalenceLevel {
    None,
    FaithfulOnly,
    FullyFaithfulOnly,
    Equivalence,
}

impl std::fmt::Display for EquivalenceLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::None => "None",
            Self::FaithfulOnly => "FaithfulOnly",
            Self::FullyFaithfulOnly => "FullyFaithfulOnly",
            Self::Equivalence => "Equivalence",
        })
    }
}

/// The strongest level attained, with the verdicts computed on the way. A
/// check is skipped (`None`) once a weaker one has failed.
#[derive(Debug, Clone)]
pub struct EquivalenceReport<O1, M1, O2, M2> {
    pub level: EquivalenceLevel,
    pub faithful: Verdict<FaithfulWitness<M1, M2>>,
    pub full: Option<Verdict<FullWitness<O1, M2>>>,
    pub essentially_surjective: Option<Verdict<EssSurjWitness<O2>>>,
}

impl<O1, M1, O2, M2> EquivalenceReport<O1, M1, O2, M2> {
    pub fn within_bound(&self) -> bool {
        self.faithful.within_bound
            || self.full.as_ref().is_some_and(|v| v.within_bound)
            || self
                .essentially_surjective
                .as_ref()
                .is_some_and(|v| v.within_bound)
    }
}

pub fn is_equivalence<O1: Cell, M1: Cell, O2: Cell, M2: Cell>(
    f: &Functor<O1, M1, O2, M2>,
    bound: usize,
    lift: Option<&Lift<'_, O1, O2, M2>>,
) -> EquivalenceReport<O1, M1, O2, M2> {
    let faithful = is_faithful(f, bound);
    if !faithful.holds {
        return EquivalenceReport {
            level: EquivalenceLevel::None,
            faithful,
            full: None,
            essentially_surjective: None,
        };
    }
    let full = is_full(f, bound);
    if !full.holds {
        return EquivalenceReport {
            level: EquivalenceLevel::FaithfulOnly,
            faithful,
            full: Some(full),
            essentially_surjective: None,
        };
    }
    let es = match lift {
        Some(l) => is_essentially_surjective_with(f, bound, l),
        None => is_essentially_surjective(f, bound),
    };
    let level = if es.holds {
        EquivalenceLevel::Equivalence
    } else {
        EquivalenceLevel::FullyFaithfulOnly
    };
    EquivalenceReport {
        level,
        faithful,
        full: Some(full),
        essentially_surjective: Some(es),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;
    use std::sync::Arc;

    fn dyncat(c: FinCategory) -> DynCategory<String, String> {
        Arc::new(c)
    }

    fn parallel_pair() -> FinCategory {
        let s = |x: &str| x.to_string();
        let morphisms = vec![
            (s("ia"), s("a"), s("a")),
            (s("ib"), s("b"), s("b")),
            (s("u"), s("a"), s("b")),
            (s("v"), s("a"), s("b")),
        ];
        let identity = [(s("a"), s("ia")), (s("b"), s("ib"))].into_iter().collect();
        let mut compose = std::collections::BTreeMap::new();
        for (m, d, c) in &morphisms {
            compose.insert((format!("i{c}"), m.clone()), m.clone());
            compose.insert((m.clone(), format!("i{d}")), m.clone());
        }
        FinCategory::new("Par", vec![s("a"), s("b")], morphisms, identity, compose).unwrap()
    }

    #[test]
    fn identity_is_an_equivalence() {
        let c = dyncat(FinCategory::poset(["0", "1"], &[("0", "1")]).unwrap());
        let r = is_equivalence(&Functor::identity(c), 0, None);
        assert_eq!(r.level, EquivalenceLevel::Equivalence);
        assert!(!r.within_bound());
    }

    #[test]
    fn collapsing_parallel_pair_is_not_faithful() {
        let par = dyncat(parallel_pair());
        let one = dyncat(FinCategory::terminal());
        let f = Functor::new(
            "!",
            par,
            one,
            |_: &String| "*".to_string(),
            |_: &String| "id_*".to_string(),
        );
        assert!(f.check_laws(0).is_empty());
        let v = is_faithful(&f, 0);
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!((w.f.as_str(), w.g.as_str()), ("u", "v"));
    }

    #[test]
    fn discrete_into_chain_is_faithful_only() {
        let disc = dyncat(FinCategory::poset(["0", "1"], &[]).unwrap());
        let chain = dyncat(FinCategory::poset(["0", "1"], &[("0", "1")]).unwrap());
        let f = Functor::new(
            "incl",
            disc,
            chain,
            |x: &String| x.clone(),
            |m: &String| m.clone(),
        );
        let r = is_equivalence(&f, 0, None);
        assert_eq!(r.level, EquivalenceLevel::FaithfulOnly);
        assert_eq!(r.full.unwrap().witness.unwrap().missed, "0<1");
    }

    #[test]
    fn missing_iso_class_breaks_essential_surjectivity() {
        let chain = dyncat(FinCategory::poset(["0", "1"], &[("0", "1")]).unwrap());
        let sub: DynCategory<String, String> = Arc::new(crate::fincat::FullSubcategory::new(
            "{0}",
            chain.clone(),
            |x: &String| x == "0",
        ));
        let f = Functor::inclusion(sub, chain);
        let r = is_equivalence(&f, 0, None);
        assert_eq!(r.level, EquivalenceLevel::FullyFaithfulOnly);
        assert_eq!(r.essentially_surjective.unwrap().witness.unwrap().object, "1");
    }
}
