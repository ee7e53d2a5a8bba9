//! Truncated augmented pseudo-cosimplicial diagrams of categories, their
//! coherence validator, and the diagram of slices induced by a morphism.
//!
//! Face convention: `d0` is change of base along the projection that omits
//! coordinate 0 (the second projection `E×_B E → E`), `d1` along the first;
//! `∂i` omits coordinate `i` of `E×_B E×_B E`. The constraint cells are
//!
//! ```text
//! σ01: ∂1∘d0 ⇒ ∂0∘d0    σ02: ∂2∘d0 ⇒ ∂0∘d1    σ12: ∂2∘d1 ⇒ ∂1∘d1
//! n0:  s0∘d0 ⇒ Id       n1:  s0∘d1 ⇒ Id       θ:   d1∘d  ⇒ d0∘d
//! ```

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::LimitError;
use crate::fincat::{Category, Cell, DynCategory, FullSubcategory, Functor, NatIso, NaturalityFailure};
use crate::slices::{change_of_base_via, slice, Cone, PullbackAlong, PullbackCategory, SliceMor};
use crate::tamper::Tamper;

/// Level 0 of an augmented diagram: `C0`, `d: C0 → C1` and `θ`.
pub struct Augmentation<O, M> {
    pub c0: DynCategory<O, M>,
    pub d: Functor<O, M, O, M>,
    pub theta: NatIso<O, M, O, M>,
}

impl<O, M> Clone for Augmentation<O, M> {
    fn clone(&self) -> Self {
        Self {
            c0: self.c0.clone(),
            d: self.d.clone(),
            theta: self.theta.clone(),
        }
    }
}

/// A pseudo-cosimplicial diagram truncated at level 3, optionally augmented.
pub struct AugCosimplicial3<O, M> {
    pub name: String,
    pub c1: DynCategory<O, M>,
    pub c2: DynCategory<O, M>,
    pub c3: DynCategory<O, M>,
    pub d0: Functor<O, M, O, M>,
    pub d1: Functor<O, M, O, M>,
    pub s0: Functor<O, M, O, M>,
    pub del0: Functor<O, M, O, M>,
    pub del1: Functor<O, M, O, M>,
    pub del2: Functor<O, M, O, M>,
    pub sigma01: NatIso<O, M, O, M>,
    pub sigma02: NatIso<O, M, O, M>,
    pub sigma12: NatIso<O, M, O, M>,
    pub n0: NatIso<O, M, O, M>,
    pub n1: NatIso<O, M, O, M>,
    pub aug: Option<Augmentation<O, M>>,
}

impl<O, M> Clone for AugCosimplicial3<O, M> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            c1: self.c1.clone(),
            c2: self.c2.clone(),
            c3: self.c3.clone(),
            d0: self.d0.clone(),
            d1: self.d1.clone(),
            s0: self.s0.clone(),
            del0: self.del0.clone(),
            del1: self.del1.clone(),
            del2: self.del2.clone(),
            sigma01: self.sigma01.clone(),
            sigma02: self.sigma02.clone(),
            sigma12: self.sigma12.clone(),
            n0: self.n0.clone(),
            n1: self.n1.clone(),
            aug: self.aug.clone(),
        }
    }
}

impl<O, M> fmt::Debug for AugCosimplicial3<O, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AugCosimplicial3({})", self.name)
    }
}

/// The associativity and identity equations of an augmented diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Equation {
    /// `∂0(θ)∘σ02∘∂2(θ) = σ01∘∂1(θ)∘σ12` at `d(X)`.
    Associativity,
    /// `n0∘s0(θ) = n1` at `d(X)`.
    Identity,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::Associativity => "associativity",
            Equation::Identity => "identity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoherenceFailure<O, M> {
    /// Both sides typecheck but differ.
    Equation {
        equation: Equation,
        object: O,
        lhs: M,
        rhs: M,
    },
    /// A side of the equation does not compose.
    IllTyped { equation: Equation, object: O },
    /// A constraint cell is mistyped, not natural or not invertible.
    Cell {
        cell: String,
        failure: NaturalityFailure<O, M, M>,
    },
    /// A face or degeneracy sends an enumerated object outside its target.
    Outside { functor: String, object: O },
}

#[derive(Debug, Clone)]
pub struct CoherenceReport<O, M> {
    pub failures: Vec<CoherenceFailure<O, M>>,
    /// Verdict only certified up to the enumeration bound.
    pub within_bound: bool,
    pub objects_checked: usize,
}

impl<O, M> CoherenceReport<O, M> {
    pub fn is_empty(&self) -> bool {
        self.failures.is_empty()
    }
}

impl<O: Cell, M: Cell> AugCosimplicial3<O, M> {
    pub fn c0(&self) -> Option<&DynCategory<O, M>> {
        self.aug.as_ref().map(|a| &a.c0)
    }

    pub fn d(&self) -> Option<&Functor<O, M, O, M>> {
        self.aug.as_ref().map(|a| &a.d)
    }

    pub fn theta(&self) -> Option<&NatIso<O, M, O, M>> {
        self.aug.as_ref().map(|a| &a.theta)
    }

    pub fn cells(&self) -> [(&'static str, &NatIso<O, M, O, M>); 5] {
        [
            ("sigma01", &self.sigma01),
            ("sigma02", &self.sigma02),
            ("sigma12", &self.sigma12),
            ("n0", &self.n0),
            ("n1", &self.n1),
        ]
    }

    /// Assemble from faces; every constraint cell is given by forward and
    /// backward component functions and typed against the composites.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        name: impl Into<String>,
        levels: [DynCategory<O, M>; 3],
        faces: [Functor<O, M, O, M>; 6],
        cells: [CellFns<O, M>; 5],
        aug: Option<(DynCategory<O, M>, Functor<O, M, O, M>, CellFns<O, M>)>,
    ) -> Self {
        let [c1, c2, c3] = levels;
        let [d0, d1, s0, del0, del1, del2] = faces;
        let [c01, c02, c12, cn0, cn1] = cells;
        let id1 = Functor::identity(c1.clone());
        let sigma01 = c01.into_iso("σ01", d0.then(&del1), d0.then(&del0));
        let sigma02 = c02.into_iso("σ02", d0.then(&del2), d1.then(&del0));
        let sigma12 = c12.into_iso("σ12", d1.then(&del2), d1.then(&del1));
        let n0 = cn0.into_iso("n0", d0.then(&s0), id1.clone());
        let n1 = cn1.into_iso("n1", d1.then(&s0), id1);
        let aug = aug.map(|(c0, d, th)| {
            let theta = th.into_iso("θ", d.then(&d1), d.then(&d0));
            Augmentation { c0, d, theta }
        });
        Self {
            name: name.into(),
            c1,
            c2,
            c3,
            d0,
            d1,
            s0,
            del0,
            del1,
            del2,
            sigma01,
            sigma02,
            sigma12,
            n0,
            n1,
            aug,
        }
    }

    /// A strict diagram: all constraint cells are identities, so the
    /// cosimplicial identities must hold on the nose (checked by
    /// [`validate_coherence`] through the typing of the cells).
    pub fn strict(
        name: impl Into<String>,
        levels: [DynCategory<O, M>; 3],
        faces: [Functor<O, M, O, M>; 6],
        aug: Option<(DynCategory<O, M>, Functor<O, M, O, M>)>,
    ) -> Self {
        let id_cell = |cat: DynCategory<O, M>, f: Functor<O, M, O, M>| {
            let (c2, f2) = (cat.clone(), f.clone());
            CellFns::new(
                move |x: &O| cat.identity(&f.obj(x)),
                move |x: &O| c2.identity(&f2.obj(x)),
            )
        };
        let [d0, d1, s0, del0, del1, del2] = faces.clone();
        let [c1, _, c3] = levels.clone();
        let cells = [
            id_cell(c3.clone(), d0.then(&del1)),
            id_cell(c3.clone(), d0.then(&del2)),
            id_cell(c3.clone(), d1.then(&del2)),
            id_cell(c1.clone(), d0.then(&s0)),
            id_cell(c1.clone(), d1.then(&s0)),
        ];
        let _ = (del0, s0);
        let c2 = levels[1].clone();
        let aug = aug.map(|(c0, d)| {
            let th = id_cell(c2.clone(), d.then(&d1));
            (c0, d, th)
        });
        Self::assemble(name, levels, faces, cells, aug)
    }

    /// Full sub-diagram on the objects accepted by `keep(level, object)`.
    /// Closure under the faces is not assumed; [`validate_coherence`]
    /// reports escaping objects.
    pub fn restrict(
        &self,
        name: impl Into<String>,
        keep: impl Fn(usize, &O) -> bool + Send + Sync + 'static,
    ) -> Self {
        let keep = Arc::new(keep);
        let sub = |level: usize, cat: &DynCategory<O, M>| -> DynCategory<O, M> {
            let k = keep.clone();
            Arc::new(FullSubcategory::new(
                format!("{}|{level}", cat.name()),
                cat.clone(),
                move |x: &O| k(level, x),
            ))
        };
        let c1 = sub(1, &self.c1);
        let c2 = sub(2, &self.c2);
        let c3 = sub(3, &self.c3);
        let r = |f: &Functor<O, M, O, M>, s: &DynCategory<O, M>, t: &DynCategory<O, M>| {
            f.restrict(f.name.clone(), s.clone(), t.clone())
        };
        let faces = [
            r(&self.d0, &c1, &c2),
            r(&self.d1, &c1, &c2),
            r(&self.s0, &c2, &c1),
            r(&self.del0, &c2, &c3),
            r(&self.del1, &c2, &c3),
            r(&self.del2, &c2, &c3),
        ];
        let cells = [
            CellFns::of(&self.sigma01),
            CellFns::of(&self.sigma02),
            CellFns::of(&self.sigma12),
            CellFns::of(&self.n0),
            CellFns::of(&self.n1),
        ];
        let aug = self.aug.as_ref().map(|a| {
            let c0 = sub(0, &a.c0);
            (c0.clone(), r(&a.d, &c0, &c1), CellFns::of(&a.theta))
        });
        Self::assemble(name, [c1, c2, c3], faces, cells, aug)
    }
}

pub type CompFn<O, M> = Arc<dyn Fn(&O) -> M + Send + Sync>;

/// Forward and backward component functions of a constraint cell.
pub struct CellFns<O, M> {
    forward: CompFn<O, M>,
    backward: CompFn<O, M>,
}

impl<O: Cell, M: Cell> CellFns<O, M> {
    pub fn new(
        forward: impl Fn(&O) -> M + Send + Sync + 'static,
        backward: impl Fn(&O) -> M + Send + Sync + 'static,
    ) -> Self {
        Self {
            forward: Arc::new(forward),
            backward: Arc::new(backward),
        }
    }

    pub fn into_parts(self) -> (CompFn<O, M>, CompFn<O, M>) {
        (self.forward, self.backward)
    }

    fn of(iso: &NatIso<O, M, O, M>) -> Self {
        let (a, b) = (iso.clone(), iso.clone());
        Self::new(move |x| a.at(x), move |x| b.inv_at(x))
    }

    fn into_iso(
        self,
        name: &str,
        source: Functor<O, M, O, M>,
        target: Functor<O, M, O, M>,
    ) -> NatIso<O, M, O, M> {
        let (f, b) = (self.forward, self.backward);
        NatIso::new(name, source, target, move |x| f(x), move |x| b(x))
    }
}

/// Evaluate the cells and the associativity and identity equations on every
/// object up to `bound` (naturality on every morphism between those objects).
pub fn validate_coherence<O: Cell, M: Cell>(
    d: &AugCosimplicial3<O, M>,
    bound: usize,
) -> CoherenceReport<O, M> {
    let objs1 = d.c1.objects(bound);
    let mut within_bound = !objs1.complete;
    let mut failures = Vec::new();

    let outside = |f: &Functor<O, M, O, M>, objs: &[O]| -> Vec<CoherenceFailure<O, M>> {
        objs.iter()
            .filter(|x| !f.target.contains(&f.obj(x)))
            .map(|x| CoherenceFailure::Outside {
                functor: f.name.clone(),
                object: x.clone(),
            })
            .collect()
    };
    failures.extend(outside(&d.d0, &objs1.items));
    failures.extend(outside(&d.d1, &objs1.items));
    let objs2: Vec<O> = {
        let mut v: Vec<O> = objs1
            .items
            .iter()
            .flat_map(|x| [d.d0.obj(x), d.d1.obj(x)])
            .filter(|y| d.c2.contains(y))
            .collect();
        v.sort();
        v.dedup();
        v
    };
    for f in [&d.s0, &d.del0, &d.del1, &d.del2] {
        failures.extend(outside(f, &objs2));
    }

    let c1 = d.c1.clone();
    let hom1 = |x: &O, y: &O| c1.hom(x, y);
    let cell_failures: Vec<CoherenceFailure<O, M>> = d
        .cells()
        .par_iter()
        .flat_map_iter(|(name, iso)| {
            iso.check_on(&objs1.items, hom1)
                .into_iter()
                .map(|failure| CoherenceFailure::Cell {
                    cell: name.to_string(),
                    failure,
                })
                .collect::<Vec<_>>()
        })
        .collect();
    failures.extend(cell_failures);

    let mut checked = objs1.items.len();
    if let Some(aug) = &d.aug {
        let objs0 = aug.c0.objects(bound);
        within_bound |= !objs0.complete;
        checked += objs0.items.len();
        failures.extend(outside(&aug.d, &objs0.items));
        let c0 = aug.c0.clone();
        for failure in aug.theta.check_on(&objs0.items, |x, y| c0.hom(x, y)) {
            failures.push(CoherenceFailure::Cell {
                cell: "theta".into(),
                failure,
            });
        }
        let eqs: Vec<CoherenceFailure<O, M>> = objs0
            .items
            .par_iter()
            .flat_map_iter(|x| augmented_equations(d, aug, x))
            .collect();
        failures.extend(eqs);
    }
    CoherenceReport {
        failures,
        within_bound,
        objects_checked: checked,
    }
}

fn augmented_equations<O: Cell, M: Cell>(
    d: &AugCosimplicial3<O, M>,
    aug: &Augmentation<O, M>,
    x: &O,
) -> Vec<CoherenceFailure<O, M>> {
    let mut out = Vec::new();
    let dx = aug.d.obj(x);
    let th = aug.theta.at(x);
    let c3 = &d.c3;
    let c1 = &d.c1;
    // ∂0(θ)∘σ02∘∂2(θ) = σ01∘∂1(θ)∘σ12
    let lhs = c3
        .try_compose(&d.sigma02.at(&dx), &d.del2.mor(&th))
        .and_then(|m| c3.try_compose(&d.del0.mor(&th), &m));
    let rhs = c3
        .try_compose(&d.del1.mor(&th), &d.sigma12.at(&dx))
        .and_then(|m| c3.try_compose(&d.sigma01.at(&dx), &m));
    push_equation(&mut out, Equation::Associativity, x, lhs, rhs);
    // n0∘s0(θ) = n1
    let lhs = c1.try_compose(&d.n0.at(&dx), &d.s0.mor(&th));
    let rhs = Some(d.n1.at(&dx));
    push_equation(&mut out, Equation::Identity, x, lhs, rhs);
    out
}

fn push_equation<O: Cell, M: Cell>(
    out: &mut Vec<CoherenceFailure<O, M>>,
    equation: Equation,
    x: &O,
    lhs: Option<M>,
    rhs: Option<M>,
) {
    match (lhs, rhs) {
        (Some(l), Some(r)) if l == r => {}
        (Some(lhs), Some(rhs)) => out.push(CoherenceFailure::Equation {
            equation,
            object: x.clone(),
            lhs,
            rhs,
        }),
        _ => out.push(CoherenceFailure::IllTyped {
            equation,
            object: x.clone(),
        }),
    }
}

/// The simplicial structure of `p`: the kernel pair `E2 = E×_B E`, the
/// triple product `E3 = E2 ×_B E` (elements `((e0,e1),e2)`), and the
/// maps between them.
pub struct Nerve<C: PullbackCategory> {
    pub cat: Arc<C>,
    pub p: C::Mor,
    pub e2: Cone<C::Obj, C::Mor>,
    pub e3: Cone<C::Obj, C::Mor>,
    /// `E2 → E`, `(e0,e1) ↦ e0`; `d1` pulls back along it.
    pub first: C::Mor,
    /// `E2 → E`, `(e0,e1) ↦ e1`; `d0` pulls back along it.
    pub second: C::Mor,
    pub diagonal: C::Mor,
    /// `omit[i]: E3 → E2` drops coordinate `i`.
    pub omit: [C::Mor; 3],
}

impl<C: PullbackCategory> Nerve<C> {
    pub fn new(cat: Arc<C>, p: C::Mor) -> Result<Self, LimitError> {
        let e2 = cat.pullback(&p, &p)?;
        let first = e2.pr1.clone();
        let second = e2.pr2.clone();
        let p_first = cat.compose(&p, &first);
        let e3 = cat.pullback(&p_first, &p)?;
        let id_e = cat.identity(&cat.dom(&p));
        let diagonal = cat.mediate(&e2, &id_e, &id_e)?;
        let omit0 = cat.mediate(&e2, &cat.compose(&second, &e3.pr1), &e3.pr2)?;
        let omit1 = cat.mediate(&e2, &cat.compose(&first, &e3.pr1), &e3.pr2)?;
        let omit2 = e3.pr1.clone();
        Ok(Self {
            cat,
            p,
            e2,
            e3,
            first,
            second,
            diagonal,
            omit: [omit0, omit1, omit2],
        })
    }

    pub fn base(&self) -> C::Obj {
        self.cat.cod(&self.p)
    }

    pub fn total(&self) -> C::Obj {
        self.cat.dom(&self.p)
    }
}

/// The diagram of slices of `p` together with its nerve.
pub struct BasicFibration<C: PullbackCategory> {
    pub nerve: Arc<Nerve<C>>,
    pub diagram: AugCosimplicial3<C::Mor, SliceMor<C::Mor>>,
}

impl<C: PullbackCategory> Clone for BasicFibration<C> {
    fn clone(&self) -> Self {
        Self {
            nerve: self.nerve.clone(),
            diagram: self.diagram.clone(),
        }
    }
}

/// Build the augmented diagram `C/B → C/E ⇉ C/E2 ⇶ C/E3` of `p`.
pub fn basic_fibration<C: PullbackCategory + 'static>(
    cat: Arc<C>,
    p: C::Mor,
) -> Result<BasicFibration<C>, LimitError> {
    basic_fibration_with(cat, p, None)
}

/// As [`basic_fibration`], optionally injecting a diagram-level mutation
/// ([`Tamper::InvertedTheta`] or [`Tamper::SwappedFaces`]; others are
/// ignored here).
pub fn basic_fibration_with<C: PullbackCategory + 'static>(
    cat: Arc<C>,
    p: C::Mor,
    tamper: Option<Tamper>,
) -> Result<BasicFibration<C>, LimitError> {
    let nerve = Arc::new(Nerve::new(cat.clone(), p)?);
    let n = &nerve;
    let c0 = slice(cat.clone(), n.base());
    let c1 = slice(cat.clone(), n.total());
    let c2 = slice(cat.clone(), n.e2.apex.clone());
    let c3 = slice(cat.clone(), n.e3.apex.clone());

    let along = |u: &C::Mor| PullbackAlong::new(cat.clone(), u.clone());
    let pb_p = along(&n.p);
    let pb_first = along(&n.first);
    let pb_second = along(&n.second);
    let pb_diag = along(&n.diagonal);
    let pb_omit = [along(&n.omit[0]), along(&n.omit[1]), along(&n.omit[2])];

    let swapped = tamper == Some(Tamper::SwappedFaces);
    let (face0, face1) = if swapped {
        (&pb_first, &pb_second)
    } else {
        (&pb_second, &pb_first)
    };
    let faces = [
        change_of_base_via("d0", face0.clone(), c1.clone(), c2.clone()),
        change_of_base_via("d1", face1.clone(), c1.clone(), c2.clone()),
        change_of_base_via("s0", pb_diag.clone(), c2.clone(), c1.clone()),
        change_of_base_via("∂0", pb_omit[0].clone(), c2.clone(), c3.clone()),
        change_of_base_via("∂1", pb_omit[1].clone(), c2.clone(), c3.clone()),
        change_of_base_via("∂2", pb_omit[2].clone(), c2.clone(), c3.clone()),
    ];
    let d = change_of_base_via("d", pb_p.clone(), c0.clone(), c1.clone());

    // cells always follow the standard convention
    let cells = [
        comparison_cell(&pb_second, &pb_omit[1], &pb_second, &pb_omit[0]),
        comparison_cell(&pb_second, &pb_omit[2], &pb_first, &pb_omit[0]),
        comparison_cell(&pb_first, &pb_omit[2], &pb_first, &pb_omit[1]),
        collapse_cell(&pb_second, &pb_diag),
        collapse_cell(&pb_first, &pb_diag),
    ];
    let mut theta = comparison_cell(&pb_p, &pb_first, &pb_p, &pb_second);
    if tamper == Some(Tamper::InvertedTheta) {
        let (fwd, c2t) = (theta.forward.clone(), c2.clone());
        theta = CellFns::new(
            move |x| {
                let t = fwd(x);
                let twist = c2t.last_automorphism(&t.src);
                c2t.compose(&t, &twist)
            },
            {
                let (fwd, c2t) = (theta.forward.clone(), c2.clone());
                move |x| {
                    let t = fwd(x);
                    let twist = c2t.last_automorphism(&t.src);
                    c2t.inverse(&c2t.compose(&t, &twist)).expect("iso")
                }
            },
        );
    }
    let name = format!("D[{:?}]", n.p);
    let diagram = AugCosimplicial3::assemble(
        name,
        [c1.clone(), c2, c3],
        faces,
        cells,
        Some((c0, d, theta)),
    );
    Ok(BasicFibration { nerve, diagram })
}

/// The canonical comparison `v*u*W → v'*u'*W`, valid whenever
/// `u∘v = u'∘v'`, and its inverse.
pub fn comparison_cell<C: PullbackCategory + 'static>(
    u: &PullbackAlong<C>,
    v: &PullbackAlong<C>,
    u2: &PullbackAlong<C>,
    v2: &PullbackAlong<C>,
) -> CellFns<C::Mor, SliceMor<C::Mor>> {
    let fwd = {
        let (u, v, u2, v2) = (u.clone(), v.clone(), u2.clone(), v2.clone());
        move |w: &C::Mor| iterated_comparison(w, &u, &v, &u2, &v2)
    };
    let bwd = {
        let (u, v, u2, v2) = (u.clone(), v.clone(), u2.clone(), v2.clone());
        move |w: &C::Mor| iterated_comparison(w, &u2, &v2, &u, &v)
    };
    CellFns::new(fwd, bwd)
}

fn iterated_comparison<C: PullbackCategory>(
    w: &C::Mor,
    u: &PullbackAlong<C>,
    v: &PullbackAlong<C>,
    u2: &PullbackAlong<C>,
    v2: &PullbackAlong<C>,
) -> SliceMor<C::Mor> {
    let cat = u.ambient();
    let a = u.cone(w);
    let pc = v.cone(&a.pr2);
    let a2 = u2.cone(w);
    let pc2 = v2.cone(&a2.pr2);
    let (q1, q2) = (&pc.pr1, &pc.pr2);
    let x1 = cat
        .mediate(
            &a2,
            &cat.compose(&a.pr1, q1),
            &cat.compose(v2.along(), q2),
        )
        .expect("u∘v = u'∘v' makes this a cone");
    let arrow = cat.mediate(&pc2, &x1, q2).expect("cone over v'");
    SliceMor {
        src: pc.pr2,
        tgt: pc2.pr2,
        arrow,
    }
}

/// The canonical iso `v*u*W → W` when `u∘v = id`, and its inverse.
pub fn collapse_cell<C: PullbackCategory + 'static>(
    u: &PullbackAlong<C>,
    v: &PullbackAlong<C>,
) -> CellFns<C::Mor, SliceMor<C::Mor>> {
    let fwd = {
        let (u, v) = (u.clone(), v.clone());
        move |w: &C::Mor| {
            let cat = u.ambient();
            let a = u.cone(w);
            let pc = v.cone(&a.pr2);
            SliceMor {
                src: pc.pr2.clone(),
                tgt: w.clone(),
                arrow: cat.compose(&a.pr1, &pc.pr1),
            }
        }
    };
    let bwd = {
        let (u, v) = (u.clone(), v.clone());
        move |w: &C::Mor| {
            let cat = u.ambient();
            let a = u.cone(w);
            let pc = v.cone(&a.pr2);
            let id = cat.identity(&cat.dom(w));
            let to_a = cat
                .mediate(&a, &id, &cat.compose(v.along(), w))
                .expect("u∘v = id");
            let arrow = cat.mediate(&pc, &to_a, w).expect("u∘v = id");
            SliceMor {
                src: w.clone(),
                tgt: pc.pr2,
                arrow,
            }
        }
    };
    CellFns::new(fwd, bwd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;
    use crate::finset::{FinFunction, FinSet, FinSetCat};

    fn set(ls: &[&str]) -> FinSet {
        FinSet::new(ls.iter().copied()).unwrap()
    }

    fn fib(p: FinFunction) -> BasicFibration<FinSetCat> {
        basic_fibration(Arc::new(FinSetCat), p).unwrap()
    }

    #[test]
    fn terminal_strict_diagram_is_coherent() {
        let one: DynCategory<String, String> = Arc::new(FinCategory::terminal());
        let f = || Functor::identity(one.clone());
        let d = AugCosimplicial3::strict(
            "1",
            [one.clone(), one.clone(), one.clone()],
            [f(), f(), f(), f(), f(), f()],
            Some((one.clone(), f())),
        );
        let r = validate_coherence(&d, 1);
        assert!(r.is_empty(), "{:?}", r.failures);
        assert!(!r.within_bound);
    }

    #[test]
    fn two_to_one_levels() {
        let e = set(&["a", "b"]);
        let f = fib(FinFunction::to_point(&e));
        assert_eq!(f.nerve.e2.apex.len(), 4);
        assert_eq!(f.nerve.e3.apex.len(), 8);
        assert_eq!(f.nerve.diagonal.dom().len(), 2);
        assert_eq!(f.nerve.diagonal.apply_label("b"), Some("(b,b)"));
        assert_eq!(f.nerve.omit[0].apply_label("((a,b),a)"), Some("(b,a)"));
        assert_eq!(f.nerve.omit[1].apply_label("((a,b),a)"), Some("(a,a)"));
        assert_eq!(f.nerve.omit[2].apply_label("((a,b),a)"), Some("(a,b)"));
        let r = validate_coherence(&f.diagram, 2);
        assert!(r.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn empty_total_space_collapses_upper_levels() {
        let p = FinFunction::new(FinSet::empty(), set(&["x"]), vec![]).unwrap();
        let f = fib(p);
        assert_eq!(f.diagram.c1.objects(3).items.len(), 1);
        assert_eq!(f.diagram.c0().unwrap().objects(3).items.len(), 4);
        assert!(validate_coherence(&f.diagram, 3).is_empty());
    }

    #[test]
    fn identity_map_gives_relabel_theta() {
        let b = set(&["x", "y"]);
        let f = fib(FinFunction::identity(&b));
        let x = FinFunction::from_labels(set(&["t"]), b, [("t", "y")]).unwrap();
        let th = f.diagram.theta().unwrap().at(&x);
        assert!(th.arrow.is_bijective());
        assert!(validate_coherence(&f.diagram, 2).is_empty());
    }

    #[test]
    fn inverted_theta_is_detected() {
        let e = set(&["a", "b"]);
        let f = basic_fibration_with(
            Arc::new(FinSetCat),
            FinFunction::to_point(&e),
            Some(Tamper::InvertedTheta),
        )
        .unwrap();
        let r = validate_coherence(&f.diagram, 2);
        assert!(!r.is_empty());
    }

    #[test]
    fn swapped_faces_are_detected() {
        let e = set(&["a", "b"]);
        let f = basic_fibration_with(
            Arc::new(FinSetCat),
            FinFunction::to_point(&e),
            Some(Tamper::SwappedFaces),
        )
        .unwrap();
        assert!(!validate_coherence(&f.diagram, 1).is_empty());
    }
}
