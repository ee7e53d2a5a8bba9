//! Finite and boundedly-enumerable categories, functors and natural
//! transformations.
//!
//! Composition is applicative throughout: `compose(g, f)` is "f, then g".

mod decide;
mod table;

use std::fmt::{self, Debug};
use std::hash::Hash;
use std::sync::Arc;

pub use decide::{
    find_isomorphism, is_equivalence, is_essentially_surjective, is_essentially_surjective_with,
    is_faithful, is_full, EquivalenceLevel, EquivalenceReport, EssSurjWitness, FaithfulWitness,
    FullWitness, Lift, Verdict,
};
pub use table::{validate_category, FinCategory, TableViolation};

/// Anything usable as an object or morphism.
pub trait Cell: Clone + Eq + Hash + Ord + Debug + Send + Sync + 'static {}
impl<T: Clone + Eq + Hash + Ord + Debug + Send + Sync + 'static> Cell for T {}

/// Result of a bounded enumeration. `complete` is false when the bound cut
/// the enumeration short, in which case downstream verdicts are only
/// "within bound".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumerated<T> {
    pub items: Vec<T>,
    pub complete: bool,
}

impl<T> Enumerated<T> {
    pub fn complete(items: Vec<T>) -> Self {
        Self {
            items,
            complete: true,
        }
    }

    pub fn truncated(items: Vec<T>) -> Self {
        Self {
            items,
            complete: false,
        }
    }

    pub fn complete_if(mut self, yes: bool) -> Self {
        self.complete |= yes;
        self
    }

    pub fn filter(self, mut keep: impl FnMut(&T) -> bool) -> Self {
        Self {
            items: self.items.into_iter().filter(|x| keep(x)).collect(),
            complete: self.complete,
        }
    }
}

/// A category whose objects can be enumerated up to a size bound and whose
/// hom-sets are finite and decidable.
pub trait Category: Send + Sync {
    type Obj: Cell;
    type Mor: Cell;

    fn name(&self) -> String;

    /// Objects up to `bound`, deterministic and stable under repetition.
    fn objects(&self, bound: usize) -> Enumerated<Self::Obj>;

    fn hom(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor>;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;

    fn cod(&self, f: &Self::Mor) -> Self::Obj;

    fn identity(&self, x: &Self::Obj) -> Self::Mor;

    /// `g ∘ f`, or `None` when `cod f ≠ dom g`.
    fn try_compose(&self, g: &Self::Mor, f: &Self::Mor) -> Option<Self::Mor>;

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "{}: composing non-composable morphisms {g:?} after {f:?}",
                self.name()
            )
        })
    }

    /// Does the object belong to this category? Only subcategories refine this.
    fn contains(&self, _x: &Self::Obj) -> bool {
        true
    }

    /// Canonical representative used to de-duplicate enumerations.
    fn canonical(&self, x: &Self::Obj) -> Self::Obj {
        x.clone()
    }

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        let (x, y) = (self.dom(f), self.cod(f));
        let idx = self.identity(&x);
        let idy = self.identity(&y);
        self.hom(&y, &x).into_iter().find(|g| {
            self.try_compose(g, f).as_ref() == Some(&idx)
                && self.try_compose(f, g).as_ref() == Some(&idy)
        })
    }

    fn is_iso(&self, f: &Self::Mor) -> bool {
        self.inverse(f).is_some()
    }

    /// All isomorphisms `x → y`, in hom enumeration order.
    fn isomorphisms(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor> {
        self.hom(x, y)
            .into_iter()
            .filter(|f| self.is_iso(f))
            .collect()
    }

    /// The first isomorphism `x → y` in canonical order, with its inverse.
    fn find_isomorphism(&self, x: &Self::Obj, y: &Self::Obj) -> Option<(Self::Mor, Self::Mor)> {
        if x == y {
            let id = self.identity(x);
            return Some((id.clone(), id));
        }
        self.hom(x, y)
            .into_iter()
            .find_map(|f| self.inverse(&f).map(|g| (f, g)))
    }

    /// The last automorphism of `x` in canonical order. Only used to build
    /// deliberately corrupted structure for mutation tests.
    fn last_automorphism(&self, x: &Self::Obj) -> Self::Mor {
        self.isomorphisms(x, x)
            .pop()
            .unwrap_or_else(|| self.identity(x))
    }
}

pub type DynCategory<O, M> = Arc<dyn Category<Obj = O, Mor = M>>;

impl<C: Category + ?Sized> Category for Arc<C> {
    type Obj = C::Obj;
    type Mor = C::Mor;
    fn name(&self) -> String {
        (**self).name()
    }
    fn objects(&self, bound: usize) -> Enumerated<C::Obj> {
        (**self).objects(bound)
    }
    fn hom(&self, x: &C::Obj, y: &C::Obj) -> Vec<C::Mor> {
        (**self).hom(x, y)
    }
    fn dom(&self, f: &C::Mor) -> C::Obj {
        (**self).dom(f)
    }
    fn cod(&self, f: &C::Mor) -> C::Obj {
        (**self).cod(f)
    }
    fn identity(&self, x: &C::Obj) -> C::Mor {
        (**self).identity(x)
    }
    fn try_compose(&self, g: &C::Mor, f: &C::Mor) -> Option<C::Mor> {
        (**self).try_compose(g, f)
    }
    fn contains(&self, x: &C::Obj) -> bool {
        (**self).contains(x)
    }
    fn canonical(&self, x: &C::Obj) -> C::Obj {
        (**self).canonical(x)
    }
    fn inverse(&self, f: &C::Mor) -> Option<C::Mor> {
        (**self).inverse(f)
    }
    fn is_iso(&self, f: &C::Mor) -> bool {
        (**self).is_iso(f)
    }
    fn isomorphisms(&self, x: &C::Obj, y: &C::Obj) -> Vec<C::Mor> {
        (**self).isomorphisms(x, y)
    }
    fn find_isomorphism(&self, x: &C::Obj, y: &C::Obj) -> Option<(C::Mor, C::Mor)> {
        (**self).find_isomorphism(x, y)
    }
    fn last_automorphism(&self, x: &C::Obj) -> C::Mor {
        (**self).last_automorphism(x)
    }
}

/// Full subcategory on the objects satisfying a predicate.
pub struct FullSubcategory<O, M> {
    name: String,
    inner: DynCategory<O, M>,
    pred: Arc<dyn Fn(&O) -> bool + Send + Sync>,
}

impl<O: Cell, M: Cell> FullSubcategory<O, M> {
    pub fn new(
        name: impl Into<String>,
        inner: DynCategory<O, M>,
        pred: impl Fn(&O) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            inner,
            pred: Arc::new(pred),
        }
    }

    pub fn inner(&self) -> &DynCategory<O, M> {
        &self.inner
    }
}

impl<O: Cell, M: Cell> Category for FullSubcategory<O, M> {
    type Obj = O;
    type Mor = M;
    fn name(&self) -> String {
        self.name.clone()
    }
    fn objects(&self, bound: usize) -> Enumerated<O> {
        self.inner.objects(bound).filter(|x| (self.pred)(x))
    }
    fn hom(&self, x: &O, y: &O) -> Vec<M> {
        self.inner.hom(x, y)
    }
    fn dom(&self, f: &M) -> O {
        self.inner.dom(f)
    }
    fn cod(&self, f: &M) -> O {
        self.inner.cod(f)
    }
    fn identity(&self, x: &O) -> M {
        self.inner.identity(x)
    }
    fn try_compose(&self, g: &M, f: &M) -> Option<M> {
        self.inner.try_compose(g, f)
    }
    fn contains(&self, x: &O) -> bool {
        (self.pred)(x) && self.inner.contains(x)
    }
    fn canonical(&self, x: &O) -> O {
        self.inner.canonical(x)
    }
    fn inverse(&self, f: &M) -> Option<M> {
        self.inner.inverse(f)
    }
    fn isomorphisms(&self, x: &O, y: &O) -> Vec<M> {
        self.inner.isomorphisms(x, y)
    }
    fn find_isomorphism(&self, x: &O, y: &O) -> Option<(M, M)> {
        self.inner.find_isomorphism(x, y)
    }
    fn last_automorphism(&self, x: &O) -> M {
        self.inner.last_automorphism(x)
    }
}

type ObjFn<A, B> = Arc<dyn Fn(&A) -> B + Send + Sync>;

/// A functor between dynamically typed categories.
pub struct Functor<O1, M1, O2, M2> {
    pub name: String,
    pub source: DynCategory<O1, M1>,
    pub target: DynCategory<O2, M2>,
    on_obj: ObjFn<O1, O2>,
    on_mor: ObjFn<M1, M2>,
}

impl<O1, M1, O2, M2> Clone for Functor<O1, M1, O2, M2> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            on_obj: self.on_obj.clone(),
            on_mor: self.on_mor.clone(),
        }
    }
}

impl<O1, M1, O2, M2> Debug for Functor<O1, M1, O2, M2> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Functor({})", self.name)
    }
}

/// A law violation found while checking a functor on an enumerated fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorViolation<O1, M1, O2, M2> {
    /// `F(f)` does not run from `F(dom f)` to `F(cod f)`.
    Typing { morphism: M1, image: M2 },
    Identity { object: O1, image: M2 },
    Composition { g: M1, f: M1, lhs: M2, rhs: M2 },
    /// `F(x)` is not an object of the target.
    Outside { object: O1, image: O2 },
}

impl<O1: Cell, M1: Cell, O2: Cell, M2: Cell> Functor<O1, M1, O2, M2> {
    pub fn new(
        name: impl Into<String>,
        source: DynCategory<O1, M1>,
        target: DynCategory<O2, M2>,
        on_obj: impl Fn(&O1) -> O2 + Send + Sync + 'static,
        on_mor: impl Fn(&M1) -> M2 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            source,
            target,
            on_obj: Arc::new(on_obj),
            on_mor: Arc::new(on_mor),
        }
    }

    pub fn obj(&self, x: &O1) -> O2 {
        (self.on_obj)(x)
    }

    pub fn mor(&self, f: &M1) -> M2 {
        (self.on_mor)(f)
    }

    /// `next ∘ self`.
    pub fn then<O3: Cell, M3: Cell>(
        &self,
        next: &Functor<O2, M2, O3, M3>,
    ) -> Functor<O1, M1, O3, M3> {
        let (f1, f2) = (self.on_obj.clone(), next.on_obj.clone());
        let (g1, g2) = (self.on_mor.clone(), next.on_mor.clone());
        Functor {
            name: format!("{}∘{}", next.name, self.name),
            source: self.source.clone(),
            target: next.target.clone(),
            on_obj: Arc::new(move |x| f2(&f1(x))),
            on_mor: Arc::new(move |m| g2(&g1(m))),
        }
    }

    /// Same maps, different name or codomain (e.g. corestriction).
    pub fn retarget(&self, name: impl Into<String>, target: DynCategory<O2, M2>) -> Self {
        Self {
            name: name.into(),
            source: self.source.clone(),
            target,
            on_obj: self.on_obj.clone(),
            on_mor: self.on_mor.clone(),
        }
    }

    pub fn restrict(
        &self,
        name: impl Into<String>,
        source: DynCategory<O1, M1>,
        target: DynCategory<O2, M2>,
    ) -> Self {
        Self {
            name: name.into(),
            source,
            target,
            on_obj: self.on_obj.clone(),
            on_mor: self.on_mor.clone(),
        }
    }

    /// Check the functor laws on all objects and morphisms enumerated up to
    /// `bound` (composition over all composable pairs of that fragment).
    pub fn check_laws(&self, bound: usize) -> Vec<FunctorViolation<O1, M1, O2, M2>> {
        let src = &self.source;
        let tgt = &self.target;
        let objs = src.objects(bound).items;
        let mut out = Vec::new();
        for x in &objs {
            let fx = self.obj(x);
            if !tgt.contains(&fx) {
                out.push(FunctorViolation::Outside {
                    object: x.clone(),
                    image: fx.clone(),
                });
            }
            let idimg = self.mor(&src.identity(x));
            if idimg != tgt.identity(&fx) {
                out.push(FunctorViolation::Identity {
                    object: x.clone(),
                    image: idimg,
                });
            }
        }
        for x in &objs {
            for y in &objs {
                for f in src.hom(x, y) {
                    let ff = self.mor(&f);
                    if tgt.dom(&ff) != self.obj(x) || tgt.cod(&ff) != self.obj(y) {
                        out.push(FunctorViolation::Typing {
                            morphism: f.clone(),
                            image: ff.clone(),
                        });
                        continue;
                    }
                    for z in &objs {
                        for g in src.hom(y, z) {
                            let lhs = self.mor(&src.compose(&g, &f));
                            let rhs = tgt.try_compose(&self.mor(&g), &ff);
                            if rhs.as_ref() != Some(&lhs) {
                                out.push(FunctorViolation::Composition {
                                    g: g.clone(),
                                    f: f.clone(),
                                    rhs: rhs.unwrap_or_else(|| lhs.clone()),
                                    lhs,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

impl<O: Cell, M: Cell> Functor<O, M, O, M> {
    pub fn identity(cat: DynCategory<O, M>) -> Self {
        Self {
            name: format!("Id[{}]", cat.name()),
            source: cat.clone(),
            target: cat,
            on_obj: Arc::new(|x: &O| x.clone()),
            on_mor: Arc::new(|f: &M| f.clone()),
        }
    }

    /// The inclusion of a full subcategory (or any subcategory sharing cells).
    pub fn inclusion(sub: DynCategory<O, M>, whole: DynCategory<O, M>) -> Self {
        Self {
            name: format!("{} ↪ {}", sub.name(), whole.name()),
            source: sub,
            target: whole,
            on_obj: Arc::new(|x: &O| x.clone()),
            on_mor: Arc::new(|f: &M| f.clone()),
        }
    }
}

/// A natural transformation `source ⇒ target` given by its components.
pub struct NatTrans<O1, M1, O2, M2> {
    pub name: String,
    pub source: Functor<O1, M1, O2, M2>,
    pub target: Functor<O1, M1, O2, M2>,
    component: ObjFn<O1, M2>,
}

impl<O1, M1, O2, M2> Clone for NatTrans<O1, M1, O2, M2> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            component: self.component.clone(),
        }
    }
}

impl<O1, M1, O2, M2> Debug for NatTrans<O1, M1, O2, M2> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NatTrans({}: {} ⇒ {})", self.name, self.source.name, self.target.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NaturalityFailure<O1, M1, M2> {
    /// Component at `object` does not run `F x → G x`.
    Typing { object: O1, component: M2 },
    /// `G(f) ∘ α_x ≠ α_y ∘ F(f)`.
    Square { morphism: M1, lhs: M2, rhs: M2 },
    /// Component has no inverse (only for isomorphisms).
    NotInvertible { object: O1, component: M2 },
    /// Declared inverse component is not a two-sided inverse.
    BadInverse { object: O1, component: M2, inverse: M2 },
}

impl<O1: Cell, M1: Cell, O2: Cell, M2: Cell> NatTrans<O1, M1, O2, M2> {
    pub fn new(
        name: impl Into<String>,
        source: Functor<O1, M1, O2, M2>,
        target: Functor<O1, M1, O2, M2>,
        component: impl Fn(&O1) -> M2 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            source,
            target,
            component: Arc::new(component),
        }
    }

    pub fn at(&self, x: &O1) -> M2 {
        (self.component)(x)
    }

    pub fn identity(f: &Functor<O1, M1, O2, M2>) -> Self {
        let g = f.clone();
        Self::new(format!("id[{}]", f.name), f.clone(), f.clone(), move |x| {
            g.target.identity(&g.obj(x))
        })
    }

    /// Vertical composite `next • self`.
    pub fn vcomp(&self, next: &NatTrans<O1, M1, O2, M2>) -> Self {
        let (a, b) = (self.clone(), next.clone());
        let tgt = self.source.target.clone();
        Self::new(
            format!("{}•{}", next.name, self.name),
            self.source.clone(),
            next.target.clone(),
            move |x| tgt.compose(&b.at(x), &a.at(x)),
        )
    }

    /// `H α`: post-whiskering by a functor.
    pub fn whisker_post<O3: Cell, M3: Cell>(
        &self,
        h: &Functor<O2, M2, O3, M3>,
    ) -> NatTrans<O1, M1, O3, M3> {
        let (a, hh) = (self.clone(), h.clone());
        NatTrans::new(
            format!("{}{}", h.name, self.name),
            self.source.then(h),
            self.target.then(h),
            move |x| hh.mor(&a.at(x)),
        )
    }

    /// `α K`: pre-whiskering by a functor.
    pub fn whisker_pre<O0: Cell, M0: Cell>(
        &self,
        k: &Functor<O0, M0, O1, M1>,
    ) -> NatTrans<O0, M0, O2, M2> {
        let (a, kk) = (self.clone(), k.clone());
        NatTrans::new(
            format!("{}{}", self.name, k.name),
            k.then(&self.source),
            k.then(&self.target),
            move |x| a.at(&kk.obj(x)),
        )
    }

    /// Typing and naturality on the fragment of the source category
    /// enumerated up to `bound`.
    pub fn check_naturality(&self, bound: usize) -> Vec<NaturalityFailure<O1, M1, M2>> {
        let src = &self.source.source;
        let tgt = &self.source.target;
        let objs = src.objects(bound).items;
        self.check_naturality_on(&objs, |x, y| src.hom(x, y), tgt)
    }

    pub(crate) fn check_naturality_on(
        &self,
        objs: &[O1],
        hom: impl Fn(&O1, &O1) -> Vec<M1>,
        tgt: &DynCategory<O2, M2>,
    ) -> Vec<NaturalityFailure<O1, M1, M2>> {
        let mut out = Vec::new();
        let comps: Vec<M2> = objs.iter().map(|x| self.at(x)).collect();
        let mut typed = vec![true; objs.len()];
        for (k, x) in objs.iter().enumerate() {
            let a = &comps[k];
            if tgt.dom(a) != self.source.obj(x) || tgt.cod(a) != self.target.obj(x) {
                typed[k] = false;
                out.push(NaturalityFailure::Typing {
                    object: x.clone(),
                    component: a.clone(),
                });
            }
        }
        for (i, x) in objs.iter().enumerate() {
            for (j, y) in objs.iter().enumerate() {
                if !typed[i] || !typed[j] {
                    continue;
                }
                for f in hom(x, y) {
                    let lhs = tgt.try_compose(&self.target.mor(&f), &comps[i]);
                    let rhs = tgt.try_compose(&comps[j], &self.source.mor(&f));
                    match (lhs, rhs) {
                        (Some(l), Some(r)) if l == r => {}
                        (l, r) => out.push(NaturalityFailure::Square {
                            morphism: f,
                            lhs: l.unwrap_or_else(|| comps[i].clone()),
                            rhs: r.unwrap_or_else(|| comps[j].clone()),
                        }),
                    }
                }
            }
        }
        out
    }
}

/// A natural isomorphism: a transformation with explicit inverse components.
pub struct NatIso<O1, M1, O2, M2> {
    pub forward: NatTrans<O1, M1, O2, M2>,
    pub backward: NatTrans<O1, M1, O2, M2>,
}

impl<O1, M1, O2, M2> Clone for NatIso<O1, M1, O2, M2> {
    fn clone(&self) -> Self {
        Self {
            forward: self.forward.clone(),
            backward: self.backward.clone(),
        }
    }
}

impl<O1, M1, O2, M2> Debug for NatIso<O1, M1, O2, M2> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NatIso({:?})", self.forward)
    }
}

impl<O1: Cell, M1: Cell, O2: Cell, M2: Cell> NatIso<O1, M1, O2, M2> {
    pub fn new(
        name: impl Into<String>,
        source: Functor<O1, M1, O2, M2>,
        target: Functor<O1, M1, O2, M2>,
        forward: impl Fn(&O1) -> M2 + Send + Sync + 'static,
        backward: impl Fn(&O1) -> M2 + Send + Sync + 'static,
    ) -> Self {
        let name = name.into();
        Self {
            forward: NatTrans::new(name.clone(), source.clone(), target.clone(), forward),
            backward: NatTrans::new(format!("{name}⁻¹"), target, source, backward),
        }
    }

    /// Build from forward components alone, inverting componentwise.
    pub fn from_forward(fwd: NatTrans<O1, M1, O2, M2>) -> Self {
        let f = fwd.clone();
        let backward = NatTrans::new(
            format!("{}⁻¹", fwd.name),
            fwd.target.clone(),
            fwd.source.clone(),
            move |x| {
                let a = f.at(x);
                f.source
                    .target
                    .inverse(&a)
                    .unwrap_or_else(|| panic!("component of {} at {x:?} is not invertible", f.name))
            },
        );
        Self {
            forward: fwd,
            backward,
        }
    }

    pub fn name(&self) -> &str {
        &self.forward.name
    }

    pub fn at(&self, x: &O1) -> M2 {
        self.forward.at(x)
    }

    pub fn inv_at(&self, x: &O1) -> M2 {
        self.backward.at(x)
    }

    pub fn inverse(&self) -> Self {
        Self {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    /// Naturality of both directions plus componentwise inverse laws.
    pub fn check(&self, bound: usize) -> Vec<NaturalityFailure<O1, M1, M2>> {
        let src = &self.forward.source.source;
        let objs = src.objects(bound).items;
        self.check_on(&objs, |x, y| src.hom(x, y))
    }

    pub(crate) fn check_on(
        &self,
        objs: &[O1],
        hom: impl Fn(&O1, &O1) -> Vec<M1> + Copy,
    ) -> Vec<NaturalityFailure<O1, M1, M2>> {
        let tgt = self.forward.source.target.clone();
        let mut out = self.forward.check_naturality_on(objs, hom, &tgt);
        out.extend(self.backward.check_naturality_on(objs, hom, &tgt));
        if !out.is_empty() {
            return out;
        }
        for x in objs {
            let (a, b) = (self.at(x), self.inv_at(x));
            let ok = tgt.try_compose(&b, &a) == Some(tgt.identity(&self.forward.source.obj(x)))
                && tgt.try_compose(&a, &b) == Some(tgt.identity(&self.forward.target.obj(x)));
            if !ok {
                out.push(NaturalityFailure::BadInverse {
                    object: x.clone(),
                    component: a,
                    inverse: b,
                });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{FinFunction, FinSet, FinSetCat};

    fn chain3() -> FinCategory {
        FinCategory::poset(["0", "1", "2"], &[("0", "1"), ("1", "2")]).unwrap()
    }

    #[test]
    fn functor_composition_is_associative_and_unital() {
        let c: DynCategory<String, String> = Arc::new(chain3());
        let shift = |x: &String| match x.as_str() {
            "0" => "1".to_string(),
            _ => "2".to_string(),
        };
        let c2 = c.clone();
        let f = Functor::new("F", c.clone(), c.clone(), shift, move |m: &String| {
            let (x, y) = (c2.dom(m), c2.cod(m));
            c2.hom(&shift(&x), &shift(&y))[0].clone()
        });
        assert!(f.check_laws(0).is_empty());
        let id = Functor::identity(c.clone());
        let objs = c.objects(0).items;
        let lhs = f.then(&f).then(&f);
        let rhs = f.then(&f.then(&f));
        for x in &objs {
            assert_eq!(lhs.obj(x), rhs.obj(x));
            assert_eq!(f.then(&id).obj(x), f.obj(x));
            assert_eq!(id.then(&f).obj(x), f.obj(x));
            for y in &objs {
                for m in c.hom(x, y) {
                    assert_eq!(lhs.mor(&m), rhs.mor(&m));
                    assert_eq!(id.then(&f).mor(&m), f.mor(&m));
                }
            }
        }
    }

    #[test]
    fn non_natural_components_are_reported() {
        let set: DynCategory<FinSet, FinFunction> = Arc::new(FinSetCat);
        let id = Functor::identity(set.clone());
        // component "swap the first two elements" is not natural
        let bad = NatTrans::new("swap", id.clone(), id, |x: &FinSet| {
            let mut m: Vec<usize> = (0..x.len()).collect();
            if m.len() >= 2 {
                m.swap(0, 1);
            }
            FinFunction::new(x.clone(), x.clone(), m).unwrap()
        });
        let fails = bad.check_naturality(2);
        assert!(fails
            .iter()
            .any(|f| matches!(f, NaturalityFailure::Square { .. })));
    }
}
