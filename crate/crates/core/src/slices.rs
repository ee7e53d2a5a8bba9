//! Slice categories, change of base, and the adjunction `Σ_p ⊣ p*`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::error::LimitError;
use crate::fincat::{Category, Cell, DynCategory, Enumerated, Functor, NatTrans};

/// A chosen pullback cone over the cospan `left`, `right`:
/// `left ∘ pr1 = right ∘ pr2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cone<O, M> {
    pub apex: O,
    pub pr1: M,
    pub pr2: M,
    pub left: M,
    pub right: M,
}

/// A category with chosen pullbacks, plus hooks to enumerate its slices.
/// The default hooks work for any category; backends override them with
/// direct constructions.
pub trait PullbackCategory: Category {
    fn pullback(
        &self,
        f: &Self::Mor,
        g: &Self::Mor,
    ) -> Result<Cone<Self::Obj, Self::Mor>, LimitError>;

    /// The unique `u` with `pr1 ∘ u = q1` and `pr2 ∘ u = q2`.
    fn mediate(
        &self,
        cone: &Cone<Self::Obj, Self::Mor>,
        q1: &Self::Mor,
        q2: &Self::Mor,
    ) -> Result<Self::Mor, LimitError>;

    /// Objects of the slice over `base` (arrows into it) up to `bound`.
    fn slice_objects(&self, base: &Self::Obj, bound: usize) -> Enumerated<Self::Mor> {
        let objs = self.objects(bound);
        let complete = objs.complete;
        let items = objs
            .items
            .iter()
            .flat_map(|x| self.hom(x, base))
            .collect();
        Enumerated { items, complete }
    }

    /// Maps `h` with `y ∘ h = x`.
    fn slice_hom(&self, x: &Self::Mor, y: &Self::Mor) -> Vec<Self::Mor> {
        self.hom(&self.dom(x), &self.dom(y))
            .into_iter()
            .filter(|h| self.try_compose(y, h).as_ref() == Some(x))
            .collect()
    }

    fn slice_isomorphisms(&self, x: &Self::Mor, y: &Self::Mor) -> Vec<Self::Mor> {
        self.slice_hom(x, y)
            .into_iter()
            .filter(|h| self.is_iso(h))
            .collect()
    }

    fn slice_find_iso(&self, x: &Self::Mor, y: &Self::Mor) -> Option<Self::Mor> {
        self.slice_hom(x, y).into_iter().find(|h| self.is_iso(h))
    }
}

impl<C: PullbackCategory + ?Sized> PullbackCategory for Arc<C> {
    fn pullback(&self, f: &C::Mor, g: &C::Mor) -> Result<Cone<C::Obj, C::Mor>, LimitError> {
        (**self).pullback(f, g)
    }
    fn mediate(
        &self,
        cone: &Cone<C::Obj, C::Mor>,
        q1: &C::Mor,
        q2: &C::Mor,
    ) -> Result<C::Mor, LimitError> {
        (**self).mediate(cone, q1, q2)
    }
    fn slice_objects(&self, base: &C::Obj, bound: usize) -> Enumerated<C::Mor> {
        (**self).slice_objects(base, bound)
    }
    fn slice_hom(&self, x: &C::Mor, y: &C::Mor) -> Vec<C::Mor> {
        (**self).slice_hom(x, y)
    }
    fn slice_isomorphisms(&self, x: &C::Mor, y: &C::Mor) -> Vec<C::Mor> {
        (**self).slice_isomorphisms(x, y)
    }
    fn slice_find_iso(&self, x: &C::Mor, y: &C::Mor) -> Option<C::Mor> {
        (**self).slice_find_iso(x, y)
    }
}

/// A morphism of a slice: a commuting triangle `tgt ∘ arrow = src`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SliceMor<M> {
    pub src: M,
    pub tgt: M,
    pub arrow: M,
}

impl<M: fmt::Debug> fmt::Debug for SliceMor<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.arrow)
    }
}

/// The slice `C/B`. Objects are arrows into `B`.
pub struct Slice<C: PullbackCategory> {
    cat: Arc<C>,
    base: C::Obj,
}

impl<C: PullbackCategory> Clone for Slice<C> {
    fn clone(&self) -> Self {
        Self {
            cat: self.cat.clone(),
            base: self.base.clone(),
        }
    }
}

impl<C: PullbackCategory> Slice<C> {
    pub fn new(cat: Arc<C>, base: C::Obj) -> Self {
        Self { cat, base }
    }

    pub fn base(&self) -> &C::Obj {
        &self.base
    }

    pub fn ambient(&self) -> &Arc<C> {
        &self.cat
    }
}

/// `slice(B, bound)` as a dynamically typed category.
pub fn slice<C: PullbackCategory + 'static>(
    cat: Arc<C>,
    base: C::Obj,
) -> DynCategory<C::Mor, SliceMor<C::Mor>> {
    Arc::new(Slice::new(cat, base))
}

impl<C: PullbackCategory + 'static> Category for Slice<C> {
    type Obj = C::Mor;
    type Mor = SliceMor<C::Mor>;

    fn name(&self) -> String {
        format!("{}/{:?}", self.cat.name(), self.base)
    }

    fn objects(&self, bound: usize) -> Enumerated<C::Mor> {
        self.cat.slice_objects(&self.base, bound)
    }

    fn hom(&self, x: &C::Mor, y: &C::Mor) -> Vec<SliceMor<C::Mor>> {
        self.cat
            .slice_hom(x, y)
            .into_iter()
            .map(|arrow| SliceMor {
                src: x.clone(),
                tgt: y.clone(),
                arrow,
            })
            .collect()
    }

    fn dom(&self, f: &SliceMor<C::Mor>) -> C::Mor {
        f.src.clone()
    }

    fn cod(&self, f: &SliceMor<C::Mor>) -> C::Mor {
        f.tgt.clone()
    }

    fn identity(&self, x: &C::Mor) -> SliceMor<C::Mor> {
        SliceMor {
            src: x.clone(),
            tgt: x.clone(),
            arrow: self.cat.identity(&self.cat.dom(x)),
        }
    }

    fn try_compose(
        &self,
        g: &SliceMor<C::Mor>,
        f: &SliceMor<C::Mor>,
    ) -> Option<SliceMor<C::Mor>> {
        if f.tgt != g.src {
            return None;
        }
        Some(SliceMor {
            src: f.src.clone(),
            tgt: g.tgt.clone(),
            arrow: self.cat.try_compose(&g.arrow, &f.arrow)?,
        })
    }

    fn contains(&self, x: &C::Mor) -> bool {
        self.cat.cod(x) == self.base
    }

    fn inverse(&self, f: &SliceMor<C::Mor>) -> Option<SliceMor<C::Mor>> {
        self.cat.inverse(&f.arrow).map(|arrow| SliceMor {
            src: f.tgt.clone(),
            tgt: f.src.clone(),
            arrow,
        })
    }

    fn isomorphisms(&self, x: &C::Mor, y: &C::Mor) -> Vec<SliceMor<C::Mor>> {
        self.cat
            .slice_isomorphisms(x, y)
            .into_iter()
            .map(|arrow| SliceMor {
                src: x.clone(),
                tgt: y.clone(),
                arrow,
            })
            .collect()
    }

    fn find_isomorphism(
        &self,
        x: &C::Mor,
        y: &C::Mor,
    ) -> Option<(SliceMor<C::Mor>, SliceMor<C::Mor>)> {
        if x == y {
            let id = self.identity(x);
            return Some((id.clone(), id));
        }
        let arrow = self.cat.slice_find_iso(x, y)?;
        let f = SliceMor {
            src: x.clone(),
            tgt: y.clone(),
            arrow,
        };
        let g = self.inverse(&f)?;
        Some((f, g))
    }
}

/// Pullbacks in a slice are computed in the ambient category.
impl<C: PullbackCategory + 'static> PullbackCategory for Slice<C> {
    fn pullback(
        &self,
        f: &SliceMor<C::Mor>,
        g: &SliceMor<C::Mor>,
    ) -> Result<Cone<C::Mor, SliceMor<C::Mor>>, LimitError> {
        if f.tgt != g.tgt {
            return Err(LimitError::CodomainMismatch(format!(
                "{:?} vs {:?}",
                f.tgt, g.tgt
            )));
        }
        let under = self.cat.pullback(&f.arrow, &g.arrow)?;
        let apex = self.cat.compose(&f.src, &under.pr1);
        Ok(Cone {
            pr1: SliceMor {
                src: apex.clone(),
                tgt: f.src.clone(),
                arrow: under.pr1,
            },
            pr2: SliceMor {
                src: apex.clone(),
                tgt: g.src.clone(),
                arrow: under.pr2,
            },
            apex,
            left: f.clone(),
            right: g.clone(),
        })
    }

    fn mediate(
        &self,
        cone: &Cone<C::Mor, SliceMor<C::Mor>>,
        q1: &SliceMor<C::Mor>,
        q2: &SliceMor<C::Mor>,
    ) -> Result<SliceMor<C::Mor>, LimitError> {
        if q1.src != q2.src {
            return Err(LimitError::BadCone("legs have different domains".into()));
        }
        let under = self.cat.pullback(&cone.left.arrow, &cone.right.arrow)?;
        let arrow = self.cat.mediate(&under, &q1.arrow, &q2.arrow)?;
        Ok(SliceMor {
            src: q1.src.clone(),
            tgt: cone.apex.clone(),
            arrow,
        })
    }
}

type ConeCache<C> = Arc<
    RwLock<
        HashMap<<C as Category>::Mor, Cone<<C as Category>::Obj, <C as Category>::Mor>>,
    >,
>;

/// Write-once cache of chosen pullbacks along a fixed arrow, so that a
/// change-of-base functor returns identical results on repeated calls.
pub struct PullbackAlong<C: PullbackCategory> {
    cat: Arc<C>,
    along: C::Mor,
    cache: ConeCache<C>,
}

impl<C: PullbackCategory> Clone for PullbackAlong<C> {
    fn clone(&self) -> Self {
        Self {
            cat: self.cat.clone(),
            along: self.along.clone(),
            cache: self.cache.clone(),
        }
    }
}

impl<C: PullbackCategory> PullbackAlong<C> {
    pub fn along(&self) -> &C::Mor {
        &self.along
    }

    pub fn ambient(&self) -> &Arc<C> {
        &self.cat
    }

    pub fn new(cat: Arc<C>, along: C::Mor) -> Self {
        Self {
            cat,
            along,
            cache: Arc::new(RwLock::new(HashMap::new())),
        }
    }

    /// Chosen pullback of `x` along the fixed arrow; `pr2` is `along*(x)`.
    pub fn cone(&self, x: &C::Mor) -> Cone<C::Obj, C::Mor> {
        if let Some(c) = self.cache.read().get(x) {
            return c.clone();
        }
        let c = self
            .cat
            .pullback(x, &self.along)
            .unwrap_or_else(|e| panic!("change of base along {:?}: {e}", self.along));
        self.cache.write().entry(x.clone()).or_insert(c).clone()
    }

    pub fn obj(&self, x: &C::Mor) -> C::Mor {
        self.cone(x).pr2
    }

    pub fn mor(&self, h: &SliceMor<C::Mor>) -> SliceMor<C::Mor> {
        let (cx, cy) = (self.cone(&h.src), self.cone(&h.tgt));
        let q1 = self.cat.compose(&h.arrow, &cx.pr1);
        let arrow = self
            .cat
            .mediate(&cy, &q1, &cx.pr2)
            .unwrap_or_else(|e| panic!("change of base of {h:?}: {e}"));
        SliceMor {
            src: cx.pr2,
            tgt: cy.pr2,
            arrow,
        }
    }
}

/// `u*: C/cod(u) → C/dom(u)` between the given (possibly restricted) slices.
pub fn change_of_base_between<C: PullbackCategory + 'static>(
    name: impl Into<String>,
    cat: Arc<C>,
    u: C::Mor,
    source: DynCategory<C::Mor, SliceMor<C::Mor>>,
    target: DynCategory<C::Mor, SliceMor<C::Mor>>,
) -> Functor<C::Mor, SliceMor<C::Mor>, C::Mor, SliceMor<C::Mor>> {
    change_of_base_via(name, PullbackAlong::new(cat, u), source, target)
}

/// As [`change_of_base_between`], sharing an existing pullback cache.
pub fn change_of_base_via<C: PullbackCategory + 'static>(
    name: impl Into<String>,
    along: PullbackAlong<C>,
    source: DynCategory<C::Mor, SliceMor<C::Mor>>,
    target: DynCategory<C::Mor, SliceMor<C::Mor>>,
) -> Functor<C::Mor, SliceMor<C::Mor>, C::Mor, SliceMor<C::Mor>> {
    let a2 = along.clone();
    Functor::new(name, source, target, move |x| along.obj(x), move |h| a2.mor(h))
}

/// Change of base along `u`, given by the chosen pullback.
pub fn change_of_base<C: PullbackCategory + 'static>(
    cat: Arc<C>,
    u: C::Mor,
) -> Functor<C::Mor, SliceMor<C::Mor>, C::Mor, SliceMor<C::Mor>> {
    let source = slice(cat.clone(), cat.cod(&u));
    let target = slice(cat.clone(), cat.dom(&u));
    change_of_base_between(format!("{u:?}*"), cat, u, source, target)
}

/// `Σ_u: C/dom(u) → C/cod(u)`, post-composition with `u`.
pub fn sigma<C: PullbackCategory + 'static>(
    cat: Arc<C>,
    u: C::Mor,
) -> Functor<C::Mor, SliceMor<C::Mor>, C::Mor, SliceMor<C::Mor>> {
    let source = slice(cat.clone(), cat.dom(&u));
    let target = slice(cat.clone(), cat.cod(&u));
    let (c1, u1) = (cat.clone(), u.clone());
    Functor::new(
        format!("Σ[{u:?}]"),
        source,
        target,
        move |x| cat.compose(&u, x),
        move |h: &SliceMor<C::Mor>| SliceMor {
            src: c1.compose(&u1, &h.src),
            tgt: c1.compose(&u1, &h.tgt),
            arrow: h.arrow.clone(),
        },
    )
}

/// An adjunction `left ⊣ right` with `left: C → D`.
pub struct Adjunction<O1, M1, O2, M2> {
    pub left: Functor<O1, M1, O2, M2>,
    pub right: Functor<O2, M2, O1, M1>,
    /// `Id_C ⇒ right ∘ left`
    pub unit: NatTrans<O1, M1, O1, M1>,
    /// `left ∘ right ⇒ Id_D`
    pub counit: NatTrans<O2, M2, O2, M2>,
}

impl<O1, M1, O2, M2> Clone for Adjunction<O1, M1, O2, M2> {
    fn clone(&self) -> Self {
        Self {
            left: self.left.clone(),
            right: self.right.clone(),
            unit: self.unit.clone(),
            counit: self.counit.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdjunctionFailure<O1, M1, O2, M2> {
    /// `ε_{Lc} ∘ L(η_c) ≠ id_{Lc}`
    LeftTriangle { object: O1, composite: Option<M2> },
    /// `R(ε_d) ∘ η_{Rd} ≠ id_{Rd}`
    RightTriangle { object: O2, composite: Option<M1> },
    UnitNaturality(String),
    CounitNaturality(String),
    /// `hom(L c, d) → hom(c, R d)`, `g ↦ R(g) ∘ η_c` is not bijective.
    HomBijection { left: O1, right: O2 },
}

impl<O1: Cell, M1: Cell, O2: Cell, M2: Cell> Adjunction<O1, M1, O2, M2> {
    pub fn source(&self) -> &DynCategory<O1, M1> {
        &self.left.source
    }

    pub fn target(&self) -> &DynCategory<O2, M2> {
        &self.left.target
    }

    /// Both triangle identities on every object up to `bound`.
    pub fn check_triangles(&self, bound: usize) -> Vec<AdjunctionFailure<O1, M1, O2, M2>> {
        let (c, d) = (self.source(), self.target());
        let mut out = Vec::new();
        for x in c.objects(bound).items {
            let lx = self.left.obj(&x);
            let comp = d.try_compose(&self.counit.at(&lx), &self.left.mor(&self.unit.at(&x)));
            if comp.as_ref() != Some(&d.identity(&lx)) {
                out.push(AdjunctionFailure::LeftTriangle {
                    object: x,
                    composite: comp,
                });
            }
        }
        for y in d.objects(bound).items {
            let ry = self.right.obj(&y);
            let comp = c.try_compose(&self.right.mor(&self.counit.at(&y)), &self.unit.at(&ry));
            if comp.as_ref() != Some(&c.identity(&ry)) {
                out.push(AdjunctionFailure::RightTriangle {
                    object: y,
                    composite: comp,
                });
            }
        }
        out
    }

    /// Triangle identities plus naturality of unit and counit.
    pub fn check(&self, bound: usize) -> Vec<AdjunctionFailure<O1, M1, O2, M2>> {
        let mut out = self.check_triangles(bound);
        if let Some(f) = self.unit.check_naturality(bound).into_iter().next() {
            out.push(AdjunctionFailure::UnitNaturality(format!("{f:?}")));
        }
        if let Some(f) = self.counit.check_naturality(bound).into_iter().next() {
            out.push(AdjunctionFailure::CounitNaturality(format!("{f:?}")));
        }
        out
    }

    /// The transpose `g ↦ R(g) ∘ η_c` is a bijection on every enumerated pair.
    pub fn check_hom_bijection(&self, bound: usize) -> Vec<AdjunctionFailure<O1, M1, O2, M2>> {
        let (c, d) = (self.source(), self.target());
        let mut out = Vec::new();
        let ys = d.objects(bound).items;
        for x in c.objects(bound).items {
            let eta = self.unit.at(&x);
            let lx = self.left.obj(&x);
            for y in &ys {
                let ry = self.right.obj(y);
                let rhs: std::collections::BTreeSet<M1> = c.hom(&x, &ry).into_iter().collect();
                let image: std::collections::BTreeSet<M1> = d
                    .hom(&lx, y)
                    .iter()
                    .filter_map(|g| c.try_compose(&self.right.mor(g), &eta))
                    .collect();
                if image != rhs || d.hom(&lx, y).len() != rhs.len() {
                    out.push(AdjunctionFailure::HomBijection {
                        left: x.clone(),
                        right: y.clone(),
                    });
                }
            }
        }
        out
    }
}

type SliceAdj<C> = Adjunction<
    <C as Category>::Mor,
    SliceMor<<C as Category>::Mor>,
    <C as Category>::Mor,
    SliceMor<<C as Category>::Mor>,
>;

/// `Σ_p ⊣ p*`. The unit at `W` is the mediating map `W → p*Σ_p W`,
/// `w ↦ (w, W(w))`; the counit at `X` is the first projection of the
/// chosen pullback `p*X`.
pub fn sigma_pullback_adjunction<C: PullbackCategory + 'static>(
    cat: Arc<C>,
    p: C::Mor,
) -> SliceAdj<C> {
    sigma_pullback_adjunction_with(cat, p, false)
}

/// As [`sigma_pullback_adjunction`]; with `break_counit` the counit is
/// post-composed with a non-identity automorphism (mutation testing only).
pub fn sigma_pullback_adjunction_with<C: PullbackCategory + 'static>(
    cat: Arc<C>,
    p: C::Mor,
    break_counit: bool,
) -> SliceAdj<C> {
    let left = sigma(cat.clone(), p.clone());
    let right = change_of_base(cat.clone(), p.clone());
    let along = PullbackAlong::new(cat.clone(), p.clone());
    let (c1, a1, p1) = (cat.clone(), along.clone(), p.clone());
    let unit = NatTrans::new(
        "η",
        Functor::identity(left.source.clone()),
        left.then(&right),
        move |w: &C::Mor| {
            let pw = c1.compose(&p1, w);
            let cone = a1.cone(&pw);
            let id = c1.identity(&c1.dom(w));
            let arrow = c1
                .mediate(&cone, &id, w)
                .expect("(id, W) is a cone over (p∘W, p)");
            SliceMor {
                src: w.clone(),
                tgt: cone.pr2,
                arrow,
            }
        },
    );
    let (c2, a2, p2) = (cat.clone(), along, p);
    let target = left.target.clone();
    let counit = NatTrans::new(
        "ε",
        right.then(&left),
        Functor::identity(left.target.clone()),
        move |x: &C::Mor| {
            let cone = a2.cone(x);
            let e = SliceMor {
                src: c2.compose(&p2, &cone.pr2),
                tgt: x.clone(),
                arrow: cone.pr1,
            };
            if break_counit {
                target.compose(&target.last_automorphism(x), &e)
            } else {
                e
            }
        },
    );
    Adjunction {
        left,
        right,
        unit,
        counit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{FinFunction, FinSet, FinSetCat};

    fn set(ls: &[&str]) -> FinSet {
        FinSet::new(ls.iter().copied()).unwrap()
    }

    fn fun(dom: &FinSet, cod: &FinSet, pairs: &[(&str, &str)]) -> FinFunction {
        FinFunction::from_labels(dom.clone(), cod.clone(), pairs.iter().copied()).unwrap()
    }

    #[test]
    fn slice_over_empty_base_has_one_object() {
        let s = Slice::new(Arc::new(FinSetCat), FinSet::empty());
        let objs = s.objects(3);
        assert_eq!(objs.items.len(), 1);
        assert!(objs.complete);
    }

    #[test]
    fn slice_over_point_looks_like_sets() {
        let s = Slice::new(Arc::new(FinSetCat), FinSet::point());
        let sizes: Vec<usize> = s.objects(2).items.iter().map(|x| x.dom().len()).collect();
        assert_eq!(sizes, [0, 1, 2]);
    }

    #[test]
    fn change_of_base_along_a_non_surjection_kills_the_missed_fiber() {
        let b = set(&["x", "y"]);
        let p = fun(&set(&["e"]), &b, &[("e", "x")]);
        let pstar = change_of_base(Arc::new(FinSetCat), p);
        let over_y = fun(&set(&["t"]), &b, &[("t", "y")]);
        assert!(pstar.obj(&over_y).dom().is_empty());
        let over_x = fun(&set(&["t"]), &b, &[("t", "x")]);
        assert_eq!(pstar.obj(&over_x).dom().labels(), ["(t,e)"]);
    }

    #[test]
    fn change_of_base_along_two_to_one_is_product() {
        let e = set(&["a", "b"]);
        let p = FinFunction::to_point(&e);
        let pstar = change_of_base(Arc::new(FinSetCat), p);
        let x = FinFunction::to_point(&set(&["u", "v"]));
        assert_eq!(pstar.obj(&x).dom().len(), 4);
        assert!(pstar.check_laws(2).is_empty());
    }

    #[test]
    fn change_of_base_along_identity_is_iso_not_equal() {
        let b = set(&["x", "y"]);
        let pstar = change_of_base(Arc::new(FinSetCat), FinFunction::identity(&b));
        let x = fun(&set(&["t"]), &b, &[("t", "y")]);
        let img = pstar.obj(&x);
        assert_ne!(img, x);
        assert!(pstar.target.find_isomorphism(&img, &x).is_some());
    }

    #[test]
    fn sigma_post_composes() {
        let e = set(&["a", "b"]);
        let p = FinFunction::to_point(&e);
        let s = sigma(Arc::new(FinSetCat), p.clone());
        let w = FinFunction::identity(&e);
        assert_eq!(s.obj(&w), p);
        let empty = FinFunction::new(FinSet::empty(), e.clone(), vec![]).unwrap();
        assert!(s.obj(&empty).dom().is_empty());
    }

    #[test]
    fn unit_and_counit_for_two_to_one() {
        let e = set(&["a", "b"]);
        let p = FinFunction::to_point(&e);
        let adj = sigma_pullback_adjunction(Arc::new(FinSetCat), p);
        // unit at W = id_E: w ↦ (w, w)
        let w = FinFunction::identity(&e);
        let eta = adj.unit.at(&w);
        assert_eq!(eta.arrow.apply_label("a"), Some("(a,a)"));
        assert_eq!(eta.arrow.apply_label("b"), Some("(b,b)"));
        // counit at X → 1 is the projection X × 2 → X
        let x = FinFunction::to_point(&set(&["u"]));
        let eps = adj.counit.at(&x);
        assert_eq!(eps.arrow.dom().len(), 2);
        assert_eq!(eps.arrow.indices(), [0, 0]);
        assert!(adj.check(2).is_empty());
        assert!(adj.check_hom_bijection(2).is_empty());
    }

    #[test]
    fn broken_counit_fails_a_triangle() {
        let e = set(&["a", "b"]);
        let p = FinFunction::to_point(&e);
        let adj = sigma_pullback_adjunction_with(Arc::new(FinSetCat), p, true);
        assert!(!adj.check_triangles(2).is_empty());
    }

    #[test]
    fn slice_pullbacks_compute_in_the_ambient_category() {
        let k = set(&["k0", "k1"]);
        let cat = Arc::new(Slice::new(Arc::new(FinSetCat), k.clone()));
        let x = fun(&set(&["a", "b"]), &k, &[("a", "k0"), ("b", "k1")]);
        let f = SliceMor {
            src: x.clone(),
            tgt: x.clone(),
            arrow: FinFunction::identity(x.dom()),
        };
        let cone = cat.pullback(&f, &f).unwrap();
        assert_eq!(cone.apex.dom().len(), 2);
        let m = cat.mediate(&cone, &f, &f).unwrap();
        assert_eq!(cat.compose(&cone.pr1, &m), f);
    }
}
