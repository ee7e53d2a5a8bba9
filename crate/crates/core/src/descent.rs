//! Strict descent data, the descent category, the comparison functor `Φ`
//! and the almost / plain / effective classifier.
//!
//! A datum is `(W, ρ)` with `ρ: d1(W) → d0(W)` in `C2`. For the basic
//! fibration of finite sets, `ρ` amounts to transports
//! `T_(e0,e1): W_e0 → W_e1`, and the two equations say `T12·T01 = T02` and
//! `T_ee = id`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use rayon::prelude::*;

use crate::cosimplicial::{basic_fibration_with, validate_coherence, AugCosimplicial3, BasicFibration};
use crate::error::DescentError;
use crate::fincat::{
    is_equivalence, Category, Cell, DynCategory, Enumerated, EquivalenceLevel, EquivalenceReport,
    FaithfulWitness, Functor, Lift,
};
use crate::finset::{odometer, pullback, quotient, FinFunction, FinSetCat};
use crate::slices::{PullbackCategory, SliceMor};
use crate::tamper::Tamper;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DescentDatum<O, M> {
    pub w: O,
    pub rho: M,
    pub rho_inv: M,
}

impl<O: fmt::Debug, M: fmt::Debug> fmt::Debug for DescentDatum<O, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, ρ={:?})", self.w, self.rho)
    }
}

/// A morphism of descent data: `m: W → X` in `C1` with
/// `d0(m) ∘ ρ_W = ρ_X ∘ d1(m)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DescMor<O, M> {
    pub src: DescentDatum<O, M>,
    pub tgt: DescentDatum<O, M>,
    pub m: M,
}

impl<O, M: fmt::Debug> fmt::Debug for DescMor<O, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.m)
    }
}

/// Which equation a candidate `(W, ρ)` fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatumViolation<M> {
    /// `∂0ρ ∘ σ02 ∘ ∂2ρ ∘ σ12⁻¹ ≠ σ01 ∘ ∂1ρ`; a side is `None` if it does not compose.
    Cocycle { lhs: Option<M>, rhs: Option<M> },
    /// `n0 ∘ s0(ρ) ≠ n1`.
    Unit { lhs: Option<M>, rhs: M },
}

impl<M> DatumViolation<M> {
    pub fn equation(&self) -> &'static str {
        match self {
            DatumViolation::Cocycle { .. } => "cocycle",
            DatumViolation::Unit { .. } => "unit",
        }
    }
}

/// Check both descent equations for `(w, rho)`. `Ok(None)` means `(w, rho)`
/// is a descent datum.
pub fn is_descent_datum<O: Cell, M: Cell>(
    d: &AugCosimplicial3<O, M>,
    w: &O,
    rho: &M,
) -> Result<Option<DatumViolation<M>>, DescentError> {
    check_rho(d, w, rho)?;
    Ok(cocycle_violation(d, w, rho).or_else(|| unit_violation(d, w, rho)))
}

fn check_rho<O: Cell, M: Cell>(d: &AugCosimplicial3<O, M>, w: &O, rho: &M) -> Result<M, DescentError> {
    let (s, t) = (d.d1.obj(w), d.d0.obj(w));
    if d.c2.dom(rho) != s || d.c2.cod(rho) != t {
        return Err(DescentError::BadRho(format!("{rho:?} is not a map d1(W) → d0(W)")));
    }
    d.c2
        .inverse(rho)
        .ok_or_else(|| DescentError::BadRho(format!("{rho:?} is not invertible")))
}

fn cocycle_violation<O: Cell, M: Cell>(
    d: &AugCosimplicial3<O, M>,
    w: &O,
    rho: &M,
) -> Option<DatumViolation<M>> {
    let c3 = &d.c3;
    let lhs = c3
        .try_compose(&d.del2.mor(rho), &d.sigma12.inv_at(w))
        .and_then(|m| c3.try_compose(&d.sigma02.at(w), &m))
        .and_then(|m| c3.try_compose(&d.del0.mor(rho), &m));
    let rhs = c3.try_compose(&d.sigma01.at(w), &d.del1.mor(rho));
    match (&lhs, &rhs) {
        (Some(l), Some(r)) if l == r => None,
        _ => Some(DatumViolation::Cocycle { lhs, rhs }),
    }
}

fn unit_violation<O: Cell, M: Cell>(
    d: &AugCosimplicial3<O, M>,
    w: &O,
    rho: &M,
) -> Option<DatumViolation<M>> {
    let lhs = d.c1.try_compose(&d.n0.at(w), &d.s0.mor(rho));
    let rhs = d.n1.at(w);
    (lhs.as_ref() != Some(&rhs)).then_some(DatumViolation::Unit { lhs, rhs })
}

/// Switches for the mutation suite; the default is the faithful construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DescOptions {
    pub tamper: Option<Tamper>,
}

impl DescOptions {
    pub fn tampered(t: Tamper) -> Self {
        Self { tamper: Some(t) }
    }

    fn drops_cocycle(&self) -> bool {
        self.tamper == Some(Tamper::DroppedCocycle)
    }

    fn unconstrained(&self) -> bool {
        self.tamper == Some(Tamper::UnconstrainedDescentMaps)
    }
}

type Datum<O, M> = DescentDatum<O, M>;
/// A specialised hom-set enumerator; must agree with the generic filter.
pub type HomSolver<O, M> = Arc<dyn Fn(&Datum<O, M>, &Datum<O, M>) -> Vec<M> + Send + Sync>;

/// The strict descent category of an augmented or plain diagram.
pub struct DescCategory<O: Cell, M: Cell> {
    diagram: AugCosimplicial3<O, M>,
    opts: DescOptions,
    solver: Option<HomSolver<O, M>>,
    objects: Mutex<HashMap<usize, Enumerated<Datum<O, M>>>>,
}

impl<O: Cell, M: Cell> DescCategory<O, M> {
    pub fn new(diagram: AugCosimplicial3<O, M>, opts: DescOptions) -> Self {
        Self {
            diagram,
            opts,
            solver: None,
            objects: Mutex::new(HashMap::new()),
        }
    }

    /// Install a hom solver. It is ignored under any tamper, where the data
    /// need not satisfy the equations it relies on.
    pub fn with_solver(mut self, solver: HomSolver<O, M>) -> Self {
        if self.opts.tamper.is_none() {
            self.solver = Some(solver);
        }
        self
    }

    pub fn diagram(&self) -> &AugCosimplicial3<O, M> {
        &self.diagram
    }

    pub fn datum(&self, w: &O, rho: &M) -> Result<Datum<O, M>, DescentError> {
        let rho_inv = check_rho(&self.diagram, w, rho)?;
        Ok(DescentDatum {
            w: w.clone(),
            rho: rho.clone(),
            rho_inv,
        })
    }

    fn admissible(&self, w: &O, rho: &M) -> bool {
        let d = &self.diagram;
        (self.opts.drops_cocycle() || cocycle_violation(d, w, rho).is_none())
            && unit_violation(d, w, rho).is_none()
    }

    pub fn is_desc_morphism(&self, src: &Datum<O, M>, tgt: &Datum<O, M>, m: &M) -> bool {
        let d = &self.diagram;
        let c2 = &d.c2;
        let lhs = c2.try_compose(&d.d0.mor(m), &src.rho);
        let rhs = c2.try_compose(&tgt.rho, &d.d1.mor(m));
        lhs.is_some() && lhs == rhs
    }

    fn enumerate(&self, bound: usize) -> Enumerated<Datum<O, M>> {
        let d = &self.diagram;
        let ws = d.c1.objects(bound);
        let per_w: Vec<Vec<Datum<O, M>>> = ws
            .items
            .par_iter()
            .map(|w| {
                let candidates: Vec<M> = d
                    .c2
                    .isomorphisms(&d.d1.obj(w), &d.d0.obj(w))
                    .into_iter()
                    .filter(|rho| self.admissible(w, rho))
                    .collect();
                if candidates.is_empty() {
                    return Vec::new();
                }
                // keep the first datum of every Aut(W)-orbit
                let twists: Vec<(M, M)> = d
                    .c1
                    .isomorphisms(w, w)
                    .iter()
                    .map(|a| {
                        let inv = d.c1.inverse(a).expect("automorphism");
                        (d.d0.mor(a), d.d1.mor(&inv))
                    })
                    .collect();
                let mut seen: HashSet<M> = HashSet::new();
                let mut out = Vec::new();
                for rho in candidates {
                    if seen.contains(&rho) {
                        continue;
                    }
                    for (a0, a1inv) in &twists {
                        seen.insert(d.c2.compose(a0, &d.c2.compose(&rho, a1inv)));
                    }
                    let rho_inv = d.c2.inverse(&rho).expect("isomorphism");
                    out.push(DescentDatum {
                        w: w.clone(),
                        rho,
                        rho_inv,
                    });
                }
                out
            })
            .collect();
        Enumerated {
            items: per_w.into_iter().flatten().collect(),
            complete: ws.complete,
        }
    }

    fn generic_hom(&self, x: &Datum<O, M>, y: &Datum<O, M>) -> Vec<M> {
        let mut out: Vec<M> = self
            .diagram
            .c1
            .hom(&x.w, &y.w)
            .into_iter()
            .filter(|m| self.opts.unconstrained() || self.is_desc_morphism(x, y, m))
            .collect();
        out.sort();
        out
    }

    /// Hom-set by the generic filter, bypassing any solver.
    pub fn hom_by_filter(&self, x: &Datum<O, M>, y: &Datum<O, M>) -> Vec<DescMor<O, M>> {
        self.wrap(x, y, self.generic_hom(x, y))
    }

    fn wrap(&self, x: &Datum<O, M>, y: &Datum<O, M>, ms: Vec<M>) -> Vec<DescMor<O, M>> {
        ms.into_iter()
            .map(|m| DescMor {
                src: x.clone(),
                tgt: y.clone(),
                m,
            })
            .collect()
    }
}

impl<O: Cell, M: Cell> Category for DescCategory<O, M> {
    type Obj = Datum<O, M>;
    type Mor = DescMor<O, M>;

    fn name(&self) -> String {
        format!("Desc({})", self.diagram.name)
    }

    fn objects(&self, bound: usize) -> Enumerated<Datum<O, M>> {
        if let Some(e) = self.objects.lock().get(&bound) {
            return e.clone();
        }
        let e = self.enumerate(bound);
        self.objects.lock().insert(bound, e.clone());
        e
    }

    /// Sorted by the underlying `C1` morphism.
    fn hom(&self, x: &Datum<O, M>, y: &Datum<O, M>) -> Vec<DescMor<O, M>> {
        let ms = match &self.solver {
            Some(s) => s(x, y),
            None => self.generic_hom(x, y),
        };
        self.wrap(x, y, ms)
    }

    fn dom(&self, f: &DescMor<O, M>) -> Datum<O, M> {
        f.src.clone()
    }

    fn cod(&self, f: &DescMor<O, M>) -> Datum<O, M> {
        f.tgt.clone()
    }

    fn identity(&self, x: &Datum<O, M>) -> DescMor<O, M> {
        DescMor {
            src: x.clone(),
            tgt: x.clone(),
            m: self.diagram.c1.identity(&x.w),
        }
    }

    fn try_compose(&self, g: &DescMor<O, M>, f: &DescMor<O, M>) -> Option<DescMor<O, M>> {
        if f.tgt != g.src {
            return None;
        }
        Some(DescMor {
            src: f.src.clone(),
            tgt: g.tgt.clone(),
            m: self.diagram.c1.try_compose(&g.m, &f.m)?,
        })
    }

    fn contains(&self, x: &Datum<O, M>) -> bool {
        self.diagram.c1.contains(&x.w)
            && check_rho(&self.diagram, &x.w, &x.rho).is_ok()
            && self.admissible(&x.w, &x.rho)
    }

    fn inverse(&self, f: &DescMor<O, M>) -> Option<DescMor<O, M>> {
        let m = self.diagram.c1.inverse(&f.m)?;
        Some(DescMor {
            src: f.tgt.clone(),
            tgt: f.src.clone(),
            m,
        })
    }
}

pub type DescFunctor<O, M> = Functor<O, M, Datum<O, M>, DescMor<O, M>>;

/// `Φ: C0 → Desc`, `X ↦ (d X, θ_X)`, `f ↦ d f`, built without any
/// coherence check.
pub fn comparison_unchecked<O: Cell, M: Cell>(
    desc: Arc<DescCategory<O, M>>,
) -> Result<DescFunctor<O, M>, DescentError> {
    let aug = desc.diagram.aug.clone().ok_or(DescentError::NotAugmented)?;
    let (d, theta) = (aug.d.clone(), aug.theta.clone());
    let obj = move |x: &O| DescentDatum {
        w: d.obj(x),
        rho: theta.at(x),
        rho_inv: theta.inv_at(x),
    };
    let obj2 = obj.clone();
    let (d, c0) = (aug.d.clone(), aug.c0.clone());
    Ok(Functor::new(
        "Φ",
        aug.c0.clone(),
        desc as DynCategory<_, _>,
        obj,
        move |f: &M| DescMor {
            src: obj2(&c0.dom(f)),
            tgt: obj2(&c0.cod(f)),
            m: d.mor(f),
        },
    ))
}

/// `Φ`, refusing diagrams that fail [`validate_coherence`] at `bound`.
pub fn comparison<O: Cell, M: Cell>(
    desc: Arc<DescCategory<O, M>>,
    bound: usize,
) -> Result<DescFunctor<O, M>, DescentError> {
    let report = validate_coherence(&desc.diagram, bound);
    if let Some(first) = report.failures.first() {
        return Err(DescentError::Incoherent(format!(
            "{} failure(s), first: {first:?}",
            report.failures.len()
        )));
    }
    comparison_unchecked(desc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DescentClass {
    NotAlmost,
    Almost,
    Descent,
    Effective,
}

impl DescentClass {
    pub fn from_level(level: EquivalenceLevel) -> Self {
        match level {
            EquivalenceLevel::None => Self::NotAlmost,
            EquivalenceLevel::FaithfulOnly => Self::Almost,
            EquivalenceLevel::FullyFaithfulOnly => Self::Descent,
            EquivalenceLevel::Equivalence => Self::Effective,
        }
    }
}

impl fmt::Display for DescentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::NotAlmost => "NotAlmost",
            Self::Almost => "Almost",
            Self::Descent => "Descent",
            Self::Effective => "Effective",
        })
    }
}

pub struct Classification<O: Cell, M: Cell> {
    pub class: DescentClass,
    pub report: EquivalenceReport<O, M, Datum<O, M>, DescMor<O, M>>,
    /// Set for finite-set maps that are not surjective.
    pub partial: bool,
}

impl<O: Cell, M: Cell> Classification<O, M> {
    pub fn within_bound(&self) -> bool {
        self.report.within_bound()
    }

    pub fn not_faithful(&self) -> Option<&FaithfulWitness<M, DescMor<O, M>>> {
        self.report.faithful.witness.as_ref()
    }
}

impl<O: Cell, M: Cell> fmt::Debug for Classification<O, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Classification")
            .field("class", &self.class)
            .field("partial", &self.partial)
            .field("within_bound", &self.within_bound())
            .finish()
    }
}

/// Classify an augmented diagram by the equivalence level of `Φ`. Without a
/// lift, essential surjectivity falls back to blind search in `C0`.
pub fn classify_diagram<O: Cell, M: Cell>(
    desc: Arc<DescCategory<O, M>>,
    bound: usize,
    lift: Option<&Lift<'_, O, Datum<O, M>, DescMor<O, M>>>,
) -> Result<Classification<O, M>, DescentError> {
    let phi = comparison(desc, bound)?;
    let report = is_equivalence(&phi, bound, lift);
    Ok(Classification {
        class: DescentClass::from_level(report.level),
        report,
        partial: false,
    })
}

pub type FinDatum = DescentDatum<FinFunction, SliceMor<FinFunction>>;
pub type FinDescMor = DescMor<FinFunction, SliceMor<FinFunction>>;
pub type FinClassification = Classification<FinFunction, SliceMor<FinFunction>>;

/// `T[q][x]`: the transport of `x ∈ W_e0` along `q = (e0, e1)`, or
/// `usize::MAX` when `x` is not over `e0`.
type Transport = Vec<Vec<usize>>;

/// Elementwise view of the basic fibration of a map of finite sets.
struct Transports {
    first: FinFunction,
    second: FinFunction,
    /// `pair[e0][e1]`: index of `(e0, e1)` in `E×_B E`.
    pair: Vec<Vec<Option<usize>>>,
    /// The fibres of `p` that are non-empty, as lists of points of `E`.
    classes: Vec<Vec<usize>>,
    cache: RwLock<HashMap<(FinFunction, FinFunction), Arc<Transport>>>,
}

impl Transports {
    fn new(fib: &BasicFibration<FinSetCat>) -> Self {
        let n = &fib.nerve;
        let e = n.total().len();
        let mut pair = vec![vec![None; e]; e];
        for q in 0..n.e2.apex.len() {
            pair[n.first.apply(q)][n.second.apply(q)] = Some(q);
        }
        let classes = (0..n.p.cod().len())
            .map(|b| n.p.fiber(b))
            .filter(|c| !c.is_empty())
            .collect();
        Self {
            first: n.first.clone(),
            second: n.second.clone(),
            pair,
            classes,
            cache: RwLock::new(HashMap::new()),
        }
    }

    fn of(&self, w: &FinFunction, rho: &SliceMor<FinFunction>) -> Result<Arc<Transport>, DescentError> {
        let key = (w.clone(), rho.arrow.clone());
        if let Some(t) = self.cache.read().get(&key) {
            return Ok(t.clone());
        }
        let d1 = pullback(w, &self.first).map_err(|e| DescentError::BadRho(e.to_string()))?;
        let d0 = pullback(w, &self.second).map_err(|e| DescentError::BadRho(e.to_string()))?;
        if rho.arrow.dom() != &d1.apex || rho.arrow.cod() != &d0.apex {
            return Err(DescentError::BadRho("ρ does not run d1(W) → d0(W)".into()));
        }
        let mut t = vec![vec![usize::MAX; w.dom().len()]; self.first.dom().len()];
        for k in 0..d1.apex.len() {
            let k2 = rho.arrow.apply(k);
            t[d1.pr2.apply(k)][d1.pr1.apply(k)] = d0.pr1.apply(k2);
        }
        let t = Arc::new(t);
        self.cache.write().insert(key, t.clone());
        Ok(t)
    }

    /// Descent morphisms are determined by one fibre per class of `p`:
    /// `m_e = T^X_(r,e) ∘ m_r ∘ T^W_(e,r)`. Every candidate is re-verified.
    fn solve(&self, x: &FinDatum, y: &FinDatum) -> Vec<SliceMor<FinFunction>> {
        let (Ok(tw), Ok(tx)) = (self.of(&x.w, &x.rho), self.of(&y.w, &y.rho)) else {
            return Vec::new();
        };
        let (w, v) = (&x.w, &y.w);
        let mut digits: Vec<Vec<usize>> = Vec::new();
        let mut slots: Vec<usize> = Vec::new();
        for class in &self.classes {
            let r = class[0];
            let targets = v.fiber(r);
            for xr in w.fiber(r) {
                slots.push(xr);
                digits.push(targets.clone());
            }
        }
        let mut out: Vec<FinFunction> = odometer(&digits)
            .into_iter()
            .filter_map(|choice| {
                let mut mr = vec![usize::MAX; w.dom().len()];
                for (&s, &c) in slots.iter().zip(&choice) {
                    mr[s] = c;
                }
                let mut m = vec![usize::MAX; w.dom().len()];
                for class in &self.classes {
                    let r = class[0];
                    for &e in class {
                        let (to_r, from_r) = (self.pair[e][r]?, self.pair[r][e]?);
                        for xe in w.fiber(e) {
                            m[xe] = tx[from_r][mr[tw[to_r][xe]]];
                        }
                    }
                }
                let ok = (0..tw.len()).all(|q| {
                    (0..m.len()).all(|i| {
                        let t = tw[q][i];
                        t == usize::MAX || m[t] == tx[q][m[i]]
                    })
                });
                ok.then(|| FinFunction::new_unchecked(w.dom().clone(), v.dom().clone(), m))
            })
            .collect();
        out.sort();
        out.into_iter()
            .map(|arrow| SliceMor {
                src: w.clone(),
                tgt: v.clone(),
                arrow,
            })
            .collect()
    }
}

/// Result of gluing a descent datum down to `C/B`.
#[derive(Debug, Clone)]
pub struct Descended {
    /// The glued object `X → B`.
    pub object: FinFunction,
    /// The quotient map from the datum's carrier onto `X`'s carrier.
    pub quotient: FinFunction,
    /// Descent isomorphism `Φ(X) → datum`.
    pub iso: FinDescMor,
    /// `p` is not surjective; the object lives over `im(p)`.
    pub partial: bool,
}

/// Descent theory of a single map of finite sets: the basic fibration, its
/// descent category with an elementwise hom solver, and `Φ`.
pub struct FinSetDescent {
    pub fibration: BasicFibration<FinSetCat>,
    pub desc: Arc<DescCategory<FinFunction, SliceMor<FinFunction>>>,
    pub phi: DescFunctor<FinFunction, SliceMor<FinFunction>>,
    transports: Arc<Transports>,
    opts: DescOptions,
}

impl FinSetDescent {
    pub fn new(p: FinFunction) -> Result<Self, DescentError> {
        Self::with_options(p, DescOptions::default())
    }

    pub fn with_options(p: FinFunction, opts: DescOptions) -> Result<Self, DescentError> {
        let fibration = basic_fibration_with(Arc::new(FinSetCat), p, opts.tamper)?;
        let transports = Arc::new(Transports::new(&fibration));
        let t2 = transports.clone();
        let desc = Arc::new(
            DescCategory::new(fibration.diagram.clone(), opts)
                .with_solver(Arc::new(move |x, y| t2.solve(x, y))),
        );
        let phi = comparison_unchecked(desc.clone())?;
        Ok(Self {
            fibration,
            desc,
            phi,
            transports,
            opts,
        })
    }

    pub fn p(&self) -> &FinFunction {
        &self.fibration.nerve.p
    }

    pub fn is_partial(&self) -> bool {
        !self.p().is_surjective()
    }

    /// Transports of a datum, `T[(e0,e1)]: W_e0 → W_e1`, as
    /// `((e0, e1), [(x, T x)])` with everything by index.
    pub fn transports(&self, datum: &FinDatum) -> Result<Vec<((usize, usize), Vec<(usize, usize)>)>, DescentError> {
        let t = self.transports.of(&datum.w, &datum.rho)?;
        let tr = &self.transports;
        Ok((0..t.len())
            .map(|q| {
                let moves = (0..datum.w.dom().len())
                    .filter(|&x| t[q][x] != usize::MAX)
                    .map(|x| (x, t[q][x]))
                    .collect();
                ((tr.first.apply(q), tr.second.apply(q)), moves)
            })
            .collect())
    }

    /// Glue a datum: quotient the carrier by the transports and map each
    /// class to `B` through `p`.
    pub fn descend(&self, datum: &FinDatum) -> Result<Descended, DescentError> {
        if let Some(v) = is_descent_datum(self.desc.diagram(), &datum.w, &datum.rho)? {
            return Err(DescentError::InvalidDatum(format!("{} equation fails", v.equation())));
        }
        let w = &datum.w;
        let t = self.transports.of(w, &datum.rho)?;
        let pairs: Vec<(usize, usize)> = t
            .iter()
            .flat_map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &y)| y != usize::MAX)
                    .map(|(x, &y)| (x, y))
            })
            .collect();
        let (q, proj) = quotient(w.dom(), &pairs);
        let p = self.p();
        let mut down = vec![0; q.len()];
        for x in 0..w.dom().len() {
            down[proj.apply(x)] = p.apply(w.apply(x));
        }
        let object = FinFunction::new_unchecked(q, p.cod().clone(), down);
        let glued = self.phi.obj(&object);
        let cone = FinSetCat.pullback(&object, p)?;
        let m = FinSetCat.mediate(&cone, &proj, w)?;
        let inv = m
            .inverse()
            .ok_or_else(|| DescentError::InvalidDatum("carrier does not match the glued pullback".into()))?;
        if !self.desc.is_desc_morphism(&glued, datum, &SliceMor {
            src: glued.w.clone(),
            tgt: w.clone(),
            arrow: inv.clone(),
        }) {
            return Err(DescentError::InvalidDatum(
                "gluing comparison is not a descent morphism".into(),
            ));
        }
        Ok(Descended {
            iso: DescMor {
                src: glued.clone(),
                tgt: datum.clone(),
                m: SliceMor {
                    src: glued.w,
                    tgt: w.clone(),
                    arrow: inv,
                },
            },
            object,
            quotient: proj,
            partial: self.is_partial(),
        })
    }

    /// The iso `X → descend(Φ X)` in `C/B`, `x ↦ [(x, e)]`. Fails exactly
    /// when some point of `X` lies over `B ∖ im(p)`.
    pub fn round_trip(&self, x: &FinFunction) -> Result<(Descended, SliceMor<FinFunction>), DescentError> {
        let phx = self.phi.obj(x);
        let glued = self.descend(&phx)?;
        let cone = FinSetCat.pullback(x, self.p())?;
        let mut map = vec![usize::MAX; x.dom().len()];
        for k in (0..cone.apex.len()).rev() {
            map[cone.pr1.apply(k)] = glued.quotient.apply(k);
        }
        if map.contains(&usize::MAX) {
            return Err(DescentError::InvalidDatum(
                "a point of X lies outside the image of p".into(),
            ));
        }
        let arrow = FinFunction::new_unchecked(x.dom().clone(), glued.object.dom().clone(), map);
        let over = glued.object.after(&arrow).ok().as_ref() == Some(x);
        if !over || !arrow.is_bijective() {
            return Err(DescentError::InvalidDatum("round trip is not an isomorphism over B".into()));
        }
        let iso = SliceMor {
            src: x.clone(),
            tgt: glued.object.clone(),
            arrow,
        };
        Ok((glued, iso))
    }

    /// Decide the descent class of `p` within `bound`; essential
    /// surjectivity of `Φ` is decided by gluing every enumerated datum.
    pub fn classify(&self, bound: usize) -> Result<FinClassification, DescentError> {
        let lift = |t: &FinDatum| self.descend(t).ok().map(|g| (g.object, g.iso));
        let mut c = classify_diagram(self.desc.clone(), bound, Some(&lift))?;
        c.partial = self.is_partial();
        Ok(c)
    }

    /// Descent category of the full sub-diagram on `keep(level, object)`,
    /// sharing the elementwise hom solver (homs of a full sub-diagram are
    /// those of the ambient one).
    pub fn restricted(
        &self,
        name: impl Into<String>,
        keep: impl Fn(usize, &FinFunction) -> bool + Send + Sync + 'static,
    ) -> Arc<DescCategory<FinFunction, SliceMor<FinFunction>>> {
        let diagram = self.fibration.diagram.restrict(name, keep);
        let t = self.transports.clone();
        Arc::new(DescCategory::new(diagram, self.opts).with_solver(Arc::new(move |x, y| t.solve(x, y))))
    }

    pub fn options(&self) -> DescOptions {
        self.opts
    }
}

/// Classify a map of finite sets.
pub fn classify(p: &FinFunction, bound: usize) -> Result<FinClassification, DescentError> {
    FinSetDescent::new(p.clone())?.classify(bound)
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
    fn theta_of_a_point_is_a_datum() {
        let fd = FinSetDescent::new(two_to_one()).unwrap();
        let x = FinFunction::to_point(&set(&["u", "v"]));
        let phx = fd.phi.obj(&x);
        assert_eq!(is_descent_datum(fd.desc.diagram(), &phx.w, &phx.rho), Ok(None));
    }

    #[test]
    fn rho_of_wrong_type_is_rejected() {
        let fd = FinSetDescent::new(two_to_one()).unwrap();
        let d = fd.desc.diagram();
        let w = d.c1.objects(1).items[1].clone();
        let id = d.c2.identity(&d.d0.obj(&w));
        let w2 = d.c1.objects(2).items[3].clone();
        assert!(matches!(
            is_descent_datum(d, &w2, &id),
            Err(DescentError::BadRho(_))
        ));
    }

    #[test]
    fn identity_fibration_admits_only_the_canonical_rho() {
        let b = set(&["x"]);
        let fd = FinSetDescent::new(FinFunction::identity(&b)).unwrap();
        let d = fd.desc.diagram();
        for w in d.c1.objects(3).items {
            let passing: Vec<_> = d
                .c2
                .isomorphisms(&d.d1.obj(&w), &d.d0.obj(&w))
                .into_iter()
                .filter(|r| is_descent_datum(d, &w, r).unwrap().is_none())
                .collect();
            assert_eq!(passing.len(), 1, "{w:?}");
        }
    }

    #[test]
    fn solver_matches_generic_filter() {
        let fd = FinSetDescent::new(two_to_one()).unwrap();
        let objs = fd.desc.objects(3).items;
        for x in &objs {
            for y in &objs {
                assert_eq!(fd.desc.hom(x, y), fd.desc.hom_by_filter(x, y));
            }
        }
    }

    #[test]
    fn descend_singleton_datum() {
        let fd = FinSetDescent::new(two_to_one()).unwrap();
        let objs = fd.desc.objects(2).items;
        let d = objs
            .iter()
            .find(|d| d.w.dom().len() == 2 && d.w.fiber_sizes() == vec![1, 1])
            .unwrap();
        let g = fd.descend(d).unwrap();
        assert_eq!(g.object.dom().len(), 1);
    }

    #[test]
    fn two_point_fibres_glue_to_two_points() {
        let fd = FinSetDescent::new(two_to_one()).unwrap();
        let data: Vec<_> = fd
            .desc
            .objects(4)
            .items
            .into_iter()
            .filter(|d| d.w.fiber_sizes() == vec![2, 2])
            .collect();
        // matching up to relabelling is unique
        assert_eq!(data.len(), 1);
        assert_eq!(fd.descend(&data[0]).unwrap().object.dom().len(), 2);
    }

    #[test]
    fn empty_total_space_has_unique_datum() {
        let p = FinFunction::new(FinSet::empty(), set(&["x"]), vec![]).unwrap();
        let fd = FinSetDescent::new(p).unwrap();
        assert_eq!(fd.desc.objects(3).items.len(), 1);
    }

    #[test]
    fn point_missing_from_image_is_not_almost() {
        let p = FinFunction::from_labels(set(&["e"]), set(&["x", "y"]), [("e", "x")]).unwrap();
        let c = classify(&p, 2).unwrap();
        assert_eq!(c.class, DescentClass::NotAlmost);
        assert!(c.partial);
        let w = c.not_faithful().unwrap();
        assert_ne!(w.f, w.g);
        assert_eq!(w.f.src, w.g.src);
        assert_eq!(w.f.tgt, w.g.tgt);
    }

    #[test]
    fn surjections_are_effective() {
        assert_eq!(classify(&two_to_one(), 3).unwrap().class, DescentClass::Effective);
        let b = set(&["x", "y"]);
        assert_eq!(
            classify(&FinFunction::identity(&b), 3).unwrap().class,
            DescentClass::Effective
        );
    }

    #[test]
    fn round_trip_of_a_point() {
        let fd = FinSetDescent::new(two_to_one()).unwrap();
        let x = FinFunction::to_point(&set(&["u"]));
        let (_, iso) = fd.round_trip(&x).unwrap();
        assert!(iso.arrow.is_bijective());
    }
}
