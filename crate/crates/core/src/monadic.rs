//! Monads, Eilenberg–Moore categories, Beck–Chevalley mates and the
//! comparison between descent data and algebras of `p*Σ_p`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use parking_lot::Mutex;
use rayon::prelude::*;

use crate::cosimplicial::{comparison_cell, BasicFibration};
use crate::descent::{DescCategory, DescMor, DescOptions, DescentDatum, FinSetDescent};
use crate::error::{DescentError, LimitError};
use crate::fincat::{
    is_equivalence, Category, Cell, DynCategory, Enumerated, EquivalenceLevel, EquivalenceReport,
    FinCategory, Functor, NatIso, NatTrans,
};
use crate::finset::{FinFunction, FinSetCat};
use crate::slices::{
    change_of_base, sigma_pullback_adjunction, sigma_pullback_adjunction_with, Adjunction,
    PullbackAlong, PullbackCategory, SliceMor,
};
use crate::tamper::Tamper;

pub struct Monad<O, M> {
    pub name: String,
    pub t: Functor<O, M, O, M>,
    /// `Id ⇒ T`
    pub eta: NatTrans<O, M, O, M>,
    /// `TT ⇒ T`
    pub mu: NatTrans<O, M, O, M>,
}

impl<O, M> Clone for Monad<O, M> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            t: self.t.clone(),
            eta: self.eta.clone(),
            mu: self.mu.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonadLawFailure<O, M> {
    /// `μ ∘ ηT ≠ id`
    LeftUnit { object: O, composite: Option<M> },
    /// `μ ∘ Tη ≠ id`
    RightUnit { object: O, composite: Option<M> },
    /// `μ ∘ Tμ ≠ μ ∘ μT`
    Associativity { object: O, lhs: Option<M>, rhs: Option<M> },
    Naturality { transformation: String, detail: String },
}

impl<O: Cell, M: Cell> Monad<O, M> {
    pub fn base(&self) -> &DynCategory<O, M> {
        &self.t.source
    }

    pub fn identity(cat: DynCategory<O, M>) -> Self {
        let id = Functor::identity(cat.clone());
        let (c1, c2) = (cat.clone(), cat);
        Self {
            name: "Id".into(),
            eta: NatTrans::new("η", id.clone(), id.clone(), move |x| c1.identity(x)),
            mu: NatTrans::new("μ", id.clone(), id.clone(), move |x| c2.identity(x)),
            t: id,
        }
    }

    /// Unit and associativity laws on every object up to `bound`, then
    /// naturality of `η` and `μ`.
    pub fn check_laws(&self, bound: usize) -> Vec<MonadLawFailure<O, M>> {
        let c = self.base();
        let objs = c.objects(bound).items;
        let mut out: Vec<MonadLawFailure<O, M>> = objs
            .par_iter()
            .flat_map_iter(|x| {
                let mut out = Vec::new();
                let tx = self.t.obj(x);
                let id = c.identity(&tx);
                let mu = self.mu.at(x);
                let l = c.try_compose(&mu, &self.eta.at(&tx));
                if l.as_ref() != Some(&id) {
                    out.push(MonadLawFailure::LeftUnit {
                        object: x.clone(),
                        composite: l,
                    });
                }
                let r = c.try_compose(&mu, &self.t.mor(&self.eta.at(x)));
                if r.as_ref() != Some(&id) {
                    out.push(MonadLawFailure::RightUnit {
                        object: x.clone(),
                        composite: r,
                    });
                }
                let lhs = c.try_compose(&mu, &self.t.mor(&mu));
                let rhs = c.try_compose(&mu, &self.mu.at(&tx));
                if lhs.is_none() || lhs != rhs {
                    out.push(MonadLawFailure::Associativity {
                        object: x.clone(),
                        lhs,
                        rhs,
                    });
                }
                out
            })
            .collect();
        for tr in [&self.eta, &self.mu] {
            if let Some(f) = tr.check_naturality(bound).into_iter().next() {
                out.push(MonadLawFailure::Naturality {
                    transformation: tr.name.clone(),
                    detail: format!("{f:?}"),
                });
            }
        }
        out
    }
}

/// `T = RL`, `η` the unit, `μ = RεL`.
pub fn induced_monad<O1: Cell, M1: Cell, O2: Cell, M2: Cell>(
    adj: &Adjunction<O1, M1, O2, M2>,
) -> Monad<O1, M1> {
    induced_monad_with(adj, false)
}

/// As [`induced_monad`]; `break_mu` post-composes `μ` with a non-trivial
/// automorphism of `TX` (mutation testing only).
pub fn induced_monad_with<O1: Cell, M1: Cell, O2: Cell, M2: Cell>(
    adj: &Adjunction<O1, M1, O2, M2>,
    break_mu: bool,
) -> Monad<O1, M1> {
    let t = adj.left.then(&adj.right);
    let tt = t.then(&t);
    let (l, r, eps) = (adj.left.clone(), adj.right.clone(), adj.counit.clone());
    let c = adj.source().clone();
    let t2 = t.clone();
    let mu = NatTrans::new("μ", tt, t.clone(), move |x: &O1| {
        let m = r.mor(&eps.at(&l.obj(x)));
        if break_mu {
            c.compose(&c.last_automorphism(&t2.obj(x)), &m)
        } else {
            m
        }
    });
    Monad {
        name: format!("{}{}", adj.right.name, adj.left.name),
        t,
        eta: adj.unit.clone(),
        mu,
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Algebra<O, M> {
    pub x: O,
    /// `T x → x`
    pub a: M,
}

impl<O: fmt::Debug, M: fmt::Debug> fmt::Debug for Algebra<O, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, a={:?})", self.x, self.a)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgMor<O, M> {
    pub src: Algebra<O, M>,
    pub tgt: Algebra<O, M>,
    pub h: M,
}

impl<O, M: fmt::Debug> fmt::Debug for AlgMor<O, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.h)
    }
}

/// The Eilenberg–Moore category. Structure maps are found by filtering all
/// of `hom(T x, x)`.
pub struct EmCategory<O: Cell, M: Cell> {
    monad: Monad<O, M>,
    objects: Mutex<HashMap<usize, Enumerated<Algebra<O, M>>>>,
}

impl<O: Cell, M: Cell> EmCategory<O, M> {
    pub fn new(monad: Monad<O, M>) -> Self {
        Self {
            monad,
            objects: Mutex::new(HashMap::new()),
        }
    }

    pub fn monad(&self) -> &Monad<O, M> {
        &self.monad
    }

    pub fn is_algebra(&self, x: &O, a: &M) -> bool {
        let c = self.monad.base();
        let t = &self.monad.t;
        let tx = t.obj(x);
        if c.dom(a) != tx || c.cod(a) != *x {
            return false;
        }
        c.try_compose(a, &self.monad.eta.at(x)) == Some(c.identity(x))
            && c.try_compose(a, &self.monad.mu.at(x)).is_some()
            && c.try_compose(a, &self.monad.mu.at(x)) == c.try_compose(a, &t.mor(a))
    }

    pub fn is_algebra_morphism(&self, x: &Algebra<O, M>, y: &Algebra<O, M>, h: &M) -> bool {
        let c = self.monad.base();
        let lhs = c.try_compose(h, &x.a);
        lhs.is_some() && lhs == c.try_compose(&y.a, &self.monad.t.mor(h))
    }

    /// Number of isomorphism classes among the algebras up to `bound`.
    pub fn iso_classes(&self, bound: usize) -> usize {
        let objs = self.objects(bound).items;
        let mut reps: Vec<&Algebra<O, M>> = Vec::new();
        for a in &objs {
            if !reps.iter().any(|r| r.x == a.x && self.find_isomorphism(r, a).is_some()) {
                reps.push(a);
            }
        }
        reps.len()
    }
}

impl<O: Cell, M: Cell> Category for EmCategory<O, M> {
    type Obj = Algebra<O, M>;
    type Mor = AlgMor<O, M>;

    fn name(&self) -> String {
        format!("EM({})", self.monad.name)
    }

    fn objects(&self, bound: usize) -> Enumerated<Algebra<O, M>> {
        if let Some(e) = self.objects.lock().get(&bound) {
            return e.clone();
        }
        let c = self.monad.base();
        let xs = c.objects(bound);
        let per_x: Vec<Vec<Algebra<O, M>>> = xs
            .items
            .par_iter()
            .map(|x| {
                c.hom(&self.monad.t.obj(x), x)
                    .into_iter()
                    .filter(|a| self.is_algebra(x, a))
                    .map(|a| Algebra { x: x.clone(), a })
                    .collect()
            })
            .collect();
        let e = Enumerated {
            items: per_x.into_iter().flatten().collect(),
            complete: xs.complete,
        };
        self.objects.lock().insert(bound, e.clone());
        e
    }

    fn hom(&self, x: &Algebra<O, M>, y: &Algebra<O, M>) -> Vec<AlgMor<O, M>> {
        self.monad
            .base()
            .hom(&x.x, &y.x)
            .into_iter()
            .filter(|h| self.is_algebra_morphism(x, y, h))
            .map(|h| AlgMor {
                src: x.clone(),
                tgt: y.clone(),
                h,
            })
            .collect()
    }

    fn dom(&self, f: &AlgMor<O, M>) -> Algebra<O, M> {
        f.src.clone()
    }

    fn cod(&self, f: &AlgMor<O, M>) -> Algebra<O, M> {
        f.tgt.clone()
    }

    fn identity(&self, x: &Algebra<O, M>) -> AlgMor<O, M> {
        AlgMor {
            src: x.clone(),
            tgt: x.clone(),
            h: self.monad.base().identity(&x.x),
        }
    }

    fn try_compose(&self, g: &AlgMor<O, M>, f: &AlgMor<O, M>) -> Option<AlgMor<O, M>> {
        if f.tgt != g.src {
            return None;
        }
        Some(AlgMor {
            src: f.src.clone(),
            tgt: g.tgt.clone(),
            h: self.monad.base().try_compose(&g.h, &f.h)?,
        })
    }

    fn contains(&self, x: &Algebra<O, M>) -> bool {
        self.monad.base().contains(&x.x) && self.is_algebra(&x.x, &x.a)
    }

    fn inverse(&self, f: &AlgMor<O, M>) -> Option<AlgMor<O, M>> {
        let h = self.monad.base().inverse(&f.h)?;
        Some(AlgMor {
            src: f.tgt.clone(),
            tgt: f.src.clone(),
            h,
        })
    }
}

pub type EmFunctor<O1, M1, O, M> = Functor<O1, M1, Algebra<O, M>, AlgMor<O, M>>;

/// `K: D → EM`, `K(Y) = (R Y, R ε_Y)`, `K(f) = R f`.
pub fn em_comparison<O1: Cell, M1: Cell, O2: Cell, M2: Cell>(
    adj: &Adjunction<O1, M1, O2, M2>,
    em: Arc<EmCategory<O1, M1>>,
) -> EmFunctor<O2, M2, O1, M1> {
    let (r, eps) = (adj.right.clone(), adj.counit.clone());
    let obj = move |y: &O2| Algebra {
        x: r.obj(y),
        a: r.mor(&eps.at(y)),
    };
    let obj2 = obj.clone();
    let (r, d) = (adj.right.clone(), adj.target().clone());
    Functor::new("K", adj.target().clone(), em, obj, move |f: &M2| AlgMor {
        src: obj2(&d.dom(f)),
        tgt: obj2(&d.cod(f)),
        h: r.mor(f),
    })
}

type SMor<C> = SliceMor<<C as Category>::Mor>;
type SDatum<C> = DescentDatum<<C as Category>::Mor, SMor<C>>;

/// The canonical functor `Desc(p) → EM(p*Σ_p)`:
/// `(W, ρ) ↦ (W, pr1 ∘ ρ ∘ κ)` with `κ: p*Σ_p W → d1 W`,
/// `(x, e) ↦ (x, (W x, e))`. On morphisms it is the identity of `C/E`.
pub fn descent_to_algebras<C: PullbackCategory + 'static>(
    fib: &BasicFibration<C>,
    desc: Arc<DescCategory<C::Mor, SMor<C>>>,
    em: Arc<EmCategory<C::Mor, SMor<C>>>,
) -> EmFunctor<SDatum<C>, DescMor<C::Mor, SMor<C>>, C::Mor, SMor<C>> {
    let n = fib.nerve.clone();
    let t = em.monad().t.clone();
    let obj = move |d: &SDatum<C>| {
        let cat = &n.cat;
        let w = &d.w;
        let tw = t.obj(w);
        let cone_t = cat.pullback(&cat.compose(&n.p, w), &n.p).expect("pullback");
        let cone_d1 = cat.pullback(w, &n.first).expect("pullback");
        let cone_d0 = cat.pullback(w, &n.second).expect("pullback");
        let to_e2 = cat
            .mediate(&n.e2, &cat.compose(w, &cone_t.pr1), &cone_t.pr2)
            .expect("(W∘pr1, pr2) is a cone over (p, p)");
        let kappa = cat
            .mediate(&cone_d1, &cone_t.pr1, &to_e2)
            .expect("κ is a cone over (W, first)");
        let a = cat.compose(&cone_d0.pr1, &cat.compose(&d.rho.arrow, &kappa));
        Algebra {
            x: w.clone(),
            a: SliceMor {
                src: tw,
                tgt: w.clone(),
                arrow: a,
            },
        }
    };
    let obj2 = obj.clone();
    Functor::new(
        "K'",
        desc as DynCategory<_, _>,
        em,
        obj,
        move |f: &DescMor<C::Mor, SMor<C>>| AlgMor {
            src: obj2(&f.src),
            tgt: obj2(&f.tgt),
            h: f.m.clone(),
        },
    )
}

/// The inverse construction: `ρ(x, (e0, e1)) = (a(x, e1), (e0, e1))`.
/// Returns `None` when the result is not a descent datum.
pub fn algebra_to_datum<C: PullbackCategory + 'static>(
    fib: &BasicFibration<C>,
    desc: &DescCategory<C::Mor, SMor<C>>,
    alg: &Algebra<C::Mor, SMor<C>>,
) -> Option<SDatum<C>> {
    let n = &fib.nerve;
    let cat = &n.cat;
    let w = &alg.x;
    let cone_t = cat.pullback(&cat.compose(&n.p, w), &n.p).ok()?;
    let cone_d1 = cat.pullback(w, &n.first).ok()?;
    let cone_d0 = cat.pullback(w, &n.second).ok()?;
    let lambda = cat
        .mediate(&cone_t, &cone_d1.pr1, &cat.compose(&n.second, &cone_d1.pr2))
        .ok()?;
    let q1 = cat.try_compose(&alg.a.arrow, &lambda)?;
    let arrow = cat.mediate(&cone_d0, &q1, &cone_d1.pr2).ok()?;
    let rho = SliceMor {
        src: cone_d1.pr2.clone(),
        tgt: cone_d0.pr2.clone(),
        arrow,
    };
    let d = desc.datum(w, &rho).ok()?;
    desc.contains(&d).then_some(d)
}

/// Report of the descent/monadicity comparison for one map of finite sets.
pub struct BenabouRoubaud {
    pub level: EquivalenceLevel,
    pub report: EquivalenceReport<
        DescentDatum<FinFunction, SliceMor<FinFunction>>,
        DescMor<FinFunction, SliceMor<FinFunction>>,
        Algebra<FinFunction, SliceMor<FinFunction>>,
        AlgMor<FinFunction, SliceMor<FinFunction>>,
    >,
    pub desc_objects: usize,
    pub em_objects: usize,
    pub em_iso_classes: usize,
    /// Law failures that should never occur for an honest basic fibration.
    pub incidents: Vec<String>,
    /// `U ∘ K' = U` on the nose and `K' ∘ Φ ≅ K`.
    pub factorizations_agree: bool,
}

impl BenabouRoubaud {
    pub fn holds(&self) -> bool {
        self.level == EquivalenceLevel::Equivalence
            && self.incidents.is_empty()
            && self.factorizations_agree
    }
}

impl fmt::Debug for BenabouRoubaud {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BenabouRoubaud")
            .field("level", &self.level)
            .field("desc_objects", &self.desc_objects)
            .field("em_objects", &self.em_objects)
            .field("em_iso_classes", &self.em_iso_classes)
            .field("incidents", &self.incidents)
            .field("factorizations_agree", &self.factorizations_agree)
            .finish()
    }
}

pub fn benabou_roubaud(p: &FinFunction, bound: usize) -> Result<BenabouRoubaud, DescentError> {
    benabou_roubaud_with(p, bound, None)
}

/// Compare `Desc(p)` with `EM(p*Σ_p)` within `bound`: algebra laws of each
/// image, functoriality, equivalence, and agreement of the factorizations
/// of `C/B → C/E` through both.
pub fn benabou_roubaud_with(
    p: &FinFunction,
    bound: usize,
    tamper: Option<Tamper>,
) -> Result<BenabouRoubaud, DescentError> {
    let opts = DescOptions { tamper };
    let fd = FinSetDescent::with_options(p.clone(), opts)?;
    let cat = Arc::new(FinSetCat);
    let adj =
        sigma_pullback_adjunction_with(cat, p.clone(), tamper == Some(Tamper::BrokenTriangle));
    let monad = induced_monad_with(&adj, tamper == Some(Tamper::BrokenMu));
    let em = Arc::new(EmCategory::new(monad));
    let kp = descent_to_algebras(&fd.fibration, fd.desc.clone(), em.clone());

    let mut incidents = Vec::new();
    for f in adj.check_triangles(bound).into_iter().take(3) {
        incidents.push(format!("adjunction: {f:?}"));
    }
    for f in em.monad().check_laws(bound).into_iter().take(3) {
        incidents.push(format!("monad law: {f:?}"));
    }
    let data = fd.desc.objects(bound).items;
    for d in &data {
        let k = kp.obj(d);
        if !em.is_algebra(&k.x, &k.a) {
            incidents.push(format!("K'({d:?}) is not an algebra"));
            break;
        }
    }
    if let Some(v) = kp.check_laws(bound).into_iter().next() {
        incidents.push(format!("K' is not a functor: {v:?}"));
    }

    let lift = |alg: &Algebra<FinFunction, SliceMor<FinFunction>>| {
        let d = algebra_to_datum(&fd.fibration, &fd.desc, alg)?;
        let id = em.identity(&kp.obj(&d));
        Some((d, id))
    };
    let report = is_equivalence(&kp, bound, Some(&lift));

    // U_EM ∘ K' = U_Desc on the nose; K' ∘ Φ ≅ K, with identity
    // components when the two agree on the nose
    let forget_ok = data.iter().all(|d| kp.obj(d).x == d.w);
    let k = em_comparison(&adj, em.clone());
    let kphi = fd.phi.then(&kp);
    let ys = fd.phi.source.objects(bound).items;
    let (e1, e2) = (em.clone(), em.clone());
    let (f1, f2, k1, k2) = (kphi.clone(), kphi.clone(), k.clone(), k.clone());
    let iso = NatIso::new(
        "K'Φ≅K",
        kphi,
        k,
        move |y: &FinFunction| {
            let (a, b) = (f1.obj(y), k1.obj(y));
            e1.find_isomorphism(&a, &b).map_or_else(|| e1.identity(&a), |(i, _)| i)
        },
        move |y: &FinFunction| {
            let (a, b) = (f2.obj(y), k2.obj(y));
            e2.find_isomorphism(&a, &b).map_or_else(|| e2.identity(&b), |(_, j)| j)
        },
    );
    let base = fd.phi.source.clone();
    let square_ok = iso.check_on(&ys, |y, z| base.hom(y, z)).is_empty();

    Ok(BenabouRoubaud {
        level: report.level,
        desc_objects: data.len(),
        em_objects: em.objects(bound).items.len(),
        em_iso_classes: em.iso_classes(bound),
        report,
        incidents,
        factorizations_agree: forget_ok && square_ok,
    })
}

/// A square of functors
///
/// ```text
///        top
///    A ───────▶ B
///    │          │
/// left│    α     │right      α: right∘top ⇒ bottom∘left
///    ▼          ▼
///    C ───────▶ D
///       bottom
/// ```
///
/// with left adjoints `L_l ⊣ left` and `L_r ⊣ right`.
pub struct BCSquare<O, M> {
    pub name: String,
    pub top: Functor<O, M, O, M>,
    pub left: Functor<O, M, O, M>,
    pub right: Functor<O, M, O, M>,
    pub bottom: Functor<O, M, O, M>,
    pub alpha: NatIso<O, M, O, M>,
    /// `adj_left.right` is `left`.
    pub adj_left: Adjunction<O, M, O, M>,
    /// `adj_right.right` is `right`.
    pub adj_right: Adjunction<O, M, O, M>,
}

impl<O, M> Clone for BCSquare<O, M> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            top: self.top.clone(),
            left: self.left.clone(),
            right: self.right.clone(),
            bottom: self.bottom.clone(),
            alpha: self.alpha.clone(),
            adj_left: self.adj_left.clone(),
            adj_right: self.adj_right.clone(),
        }
    }
}

/// The mate `L_r ∘ bottom ⇒ top ∘ L_l` (functors `C → B`) with its
/// components on the enumerated objects of `C`.
pub struct Mate<O, M> {
    pub trans: NatTrans<O, M, O, M>,
    pub components: Vec<(O, M)>,
    pub within_bound: bool,
}

impl<O: Cell, M: Cell> BCSquare<O, M> {
    /// The component `ε^r_{top L_l c} ∘ L_r(α⁻¹_{L_l c}) ∘ L_r(bottom(η^l_c))`.
    pub fn mate_at(&self, c: &O) -> Option<M> {
        let (ll, lr) = (&self.adj_left.left, &self.adj_right.left);
        let b = &self.top.target;
        let llc = ll.obj(c);
        let step1 = lr.mor(&self.bottom.mor(&self.adj_left.unit.at(c)));
        let step2 = lr.mor(&self.alpha.inv_at(&llc));
        let step3 = self.adj_right.counit.at(&self.top.obj(&llc));
        b.try_compose(&step3, &b.try_compose(&step2, &step1)?)
    }

    /// Validate the filler and both adjunctions on objects up to `bound`.
    pub fn check(&self, bound: usize) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(f) = self.alpha.check(bound).into_iter().next() {
            out.push(format!("filler: {f:?}"));
        }
        for (name, adj) in [("left", &self.adj_left), ("right", &self.adj_right)] {
            if let Some(f) = adj.check(bound).into_iter().next() {
                out.push(format!("{name} adjunction: {f:?}"));
            }
        }
        out
    }
}

/// Compute the mate and all its components on objects of `C` up to `bound`.
pub fn mate<O: Cell, M: Cell>(sq: &BCSquare<O, M>, bound: usize) -> Result<Mate<O, M>, String> {
    let objs = sq.left.target.objects(bound);
    let components = objs
        .items
        .par_iter()
        .map(|c| {
            sq.mate_at(c)
                .map(|m| (c.clone(), m))
                .ok_or_else(|| format!("mate component at {c:?} does not compose"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let s = sq.clone();
    let trans = NatTrans::new(
        format!("mate({})", sq.name),
        sq.bottom.then(&sq.adj_right.left),
        sq.adj_left.left.then(&sq.top),
        move |c| s.mate_at(c).expect("composable"),
    );
    Ok(Mate {
        trans,
        components,
        within_bound: !objs.complete,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcVerdict<O, M> {
    pub holds: bool,
    /// First non-invertible component.
    pub witness: Option<(O, M)>,
    pub within_bound: bool,
}

/// Is the mate invertible on every object of `C` up to `bound`?
pub fn is_beck_chevalley<O: Cell, M: Cell>(
    sq: &BCSquare<O, M>,
    bound: usize,
) -> Result<BcVerdict<O, M>, String> {
    let m = mate(sq, bound)?;
    let b = &sq.top.target;
    let witness = m.components.into_iter().find(|(_, f)| !b.is_iso(f));
    Ok(BcVerdict {
        holds: witness.is_none(),
        witness,
        within_bound: m.within_bound,
    })
}

pub type SliceSquare = BCSquare<FinFunction, SliceMor<FinFunction>>;

/// The change-of-base square of the chosen pullback `P` of `f: X → Z`,
/// `g: Y → Z`: top `g*`, left `f*`, right `q*`, bottom `r*` where
/// `r: P → X`, `q: P → Y`, filled by the canonical comparison
/// `q*g* ≅ r*f*`, with `Σ_f ⊣ f*` and `Σ_q ⊣ q*`.
pub fn finset_pullback_square(f: &FinFunction, g: &FinFunction) -> Result<SliceSquare, LimitError> {
    let cat = Arc::new(FinSetCat);
    let pb = cat.pullback(f, g)?;
    let (r, q) = (pb.pr1.clone(), pb.pr2.clone());
    let adj_left = sigma_pullback_adjunction(cat.clone(), f.clone());
    let adj_right = sigma_pullback_adjunction(cat.clone(), q.clone());
    let top = change_of_base(cat.clone(), g.clone());
    let bottom = change_of_base(cat.clone(), r.clone());
    let along = |u: &FinFunction| PullbackAlong::new(cat.clone(), u.clone());
    let cell = comparison_cell(&along(g), &along(&q), &along(f), &along(&r));
    let (fw, bw) = cell.into_parts();
    let alpha = NatIso::new(
        "α",
        top.then(&adj_right.right),
        adj_left.right.then(&bottom),
        move |w| fw(w),
        move |w| bw(w),
    );
    Ok(BCSquare {
        name: format!("pb({f:?}, {g:?})"),
        top,
        left: adj_left.right.clone(),
        right: adj_right.right.clone(),
        bottom,
        alpha,
        adj_left,
        adj_right,
    })
}

/// A table-backed square whose mate is not invertible: `A = C = D = 1`,
/// `B = {0 < 1}`, `top` picks `1`, `right` is the unique functor with left
/// adjoint picking `0`, and `left`, `bottom` are identities. The mate is
/// the arrow `0 < 1`.
pub fn broken_table_square() -> BCSquare<String, String> {
    let one: DynCategory<String, String> = Arc::new(FinCategory::terminal());
    let chain: DynCategory<String, String> = Arc::new(
        FinCategory::poset(["0", "1"], &[("0", "1")])
            .expect("chain")
            .with_name("2"),
    );
    let constant = |name: &str, src: &DynCategory<String, String>, obj: &'static str| {
        Functor::new(
            name,
            src.clone(),
            chain.clone(),
            move |_: &String| obj.to_owned(),
            move |_: &String| format!("id_{obj}"),
        )
    };
    let to_one = |name: &str, src: &DynCategory<String, String>| {
        Functor::new(
            name,
            src.clone(),
            one.clone(),
            |_: &String| "*".to_owned(),
            |_: &String| "id_*".to_owned(),
        )
    };
    let top = constant("top", &one, "1");
    let right = to_one("right", &chain);
    let lr = constant("L_r", &one, "0");
    let id1 = Functor::identity(one.clone());
    let adj_left = identity_adjunction(one.clone());
    let (o1, o2) = (one.clone(), one.clone());
    let adj_right = Adjunction {
        unit: NatTrans::new("η", id1.clone(), lr.then(&right), move |x| o1.identity(x)),
        counit: NatTrans::new(
            "ε",
            right.then(&lr),
            Functor::identity(chain.clone()),
            |b: &String| if b == "0" { "id_0".to_owned() } else { "0<1".to_owned() },
        ),
        left: lr,
        right: right.clone(),
    };
    let alpha = NatIso::new(
        "α",
        top.then(&right),
        id1.then(&id1),
        move |x| o2.identity(x),
        {
            let o3 = one.clone();
            move |x| o3.identity(x)
        },
    );
    BCSquare {
        name: "broken".into(),
        top,
        left: id1.clone(),
        right,
        bottom: id1,
        alpha,
        adj_left,
        adj_right,
    }
}

pub fn identity_adjunction<O: Cell, M: Cell>(cat: DynCategory<O, M>) -> Adjunction<O, M, O, M> {
    let id = Functor::identity(cat.clone());
    let (c1, c2) = (cat.clone(), cat);
    Adjunction {
        left: id.clone(),
        right: id.clone(),
        unit: NatTrans::new("η", id.clone(), id.then(&id), move |x| c1.identity(x)),
        counit: NatTrans::new("ε", id.then(&id), id, move |x| c2.identity(x)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinSet;

    fn set(ls: &[&str]) -> FinSet {
        FinSet::new(ls.iter().copied()).unwrap()
    }

    fn two_to_one() -> FinFunction {
        FinFunction::to_point(&set(&["a", "b"]))
    }

    #[test]
    fn identity_adjunction_gives_identity_monad() {
        let one: DynCategory<String, String> = Arc::new(FinCategory::terminal());
        let m = induced_monad(&identity_adjunction(one.clone()));
        assert!(m.check_laws(1).is_empty());
        let em = EmCategory::new(m);
        assert_eq!(em.objects(1).items.len(), 1);
    }

    #[test]
    fn induced_monad_on_two_to_one_fibres_everything() {
        let adj = sigma_pullback_adjunction(Arc::new(FinSetCat), two_to_one());
        let m = induced_monad(&adj);
        assert!(m.check_laws(2).is_empty());
        let w = FinFunction::from_labels(set(&["u", "v", "z"]), set(&["a", "b"]), [
            ("u", "a"),
            ("v", "a"),
            ("z", "b"),
        ])
        .unwrap();
        assert_eq!(m.t.obj(&w).fiber_sizes(), vec![3, 3]);
    }

    #[test]
    fn broken_mu_breaks_the_laws() {
        let adj = sigma_pullback_adjunction(Arc::new(FinSetCat), two_to_one());
        assert!(!induced_monad_with(&adj, true).check_laws(2).is_empty());
    }

    #[test]
    fn em_comparison_for_identity_is_an_equivalence() {
        let b = set(&["x", "y"]);
        let adj = sigma_pullback_adjunction(Arc::new(FinSetCat), FinFunction::identity(&b));
        let em = Arc::new(EmCategory::new(induced_monad(&adj)));
        let k = em_comparison(&adj, em);
        assert!(k.check_laws(2).is_empty());
        assert_eq!(is_equivalence(&k, 2, None).level, EquivalenceLevel::Equivalence);
    }

    #[test]
    fn two_to_one_is_monadic() {
        let adj = sigma_pullback_adjunction(Arc::new(FinSetCat), two_to_one());
        let em = Arc::new(EmCategory::new(induced_monad(&adj)));
        let k = em_comparison(&adj, em);
        assert_eq!(is_equivalence(&k, 2, None).level, EquivalenceLevel::Equivalence);
    }

    #[test]
    fn benabou_roubaud_small_cases() {
        let r = benabou_roubaud(&two_to_one(), 3).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.desc_objects, r.em_iso_classes);
        let p = FinFunction::from_labels(set(&["a", "b", "c"]), set(&["x", "y"]), [
            ("a", "x"),
            ("b", "x"),
            ("c", "y"),
        ])
        .unwrap();
        assert!(benabou_roubaud(&p, 3).unwrap().holds());
        let b = set(&["x"]);
        assert!(benabou_roubaud(&FinFunction::identity(&b), 3).unwrap().holds());
    }

    #[test]
    fn identity_square_mate_is_identity() {
        let one: DynCategory<String, String> = Arc::new(FinCategory::terminal());
        let id = Functor::identity(one.clone());
        let (o1, o2) = (one.clone(), one.clone());
        let sq = BCSquare {
            name: "id".into(),
            top: id.clone(),
            left: id.clone(),
            right: id.clone(),
            bottom: id.clone(),
            alpha: NatIso::new(
                "α",
                id.then(&id),
                id.then(&id),
                move |x| o1.identity(x),
                move |x| o2.identity(x),
            ),
            adj_left: identity_adjunction(one.clone()),
            adj_right: identity_adjunction(one.clone()),
        };
        let m = mate(&sq, 1).unwrap();
        assert_eq!(m.components, vec![("*".to_owned(), "id_*".to_owned())]);
        assert!(is_beck_chevalley(&sq, 1).unwrap().holds);
    }

    #[test]
    fn pullback_square_in_sets_satisfies_beck_chevalley() {
        let z = set(&["z0", "z1"]);
        let f = FinFunction::from_labels(set(&["a", "b"]), z.clone(), [("a", "z0"), ("b", "z0")])
            .unwrap();
        let g = FinFunction::from_labels(set(&["c", "d"]), z, [("c", "z0"), ("d", "z1")]).unwrap();
        let sq = finset_pullback_square(&f, &g).unwrap();
        assert!(sq.check(2).is_empty());
        let v = is_beck_chevalley(&sq, 3).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn broken_square_has_non_invertible_mate() {
        let sq = broken_table_square();
        assert!(sq.check(1).is_empty(), "{:?}", sq.check(1));
        let v = is_beck_chevalley(&sq, 1).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(("*".to_owned(), "0<1".to_owned())));
    }
}
