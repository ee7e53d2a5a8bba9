//! Property harnesses for the headline theorems: deterministic instance
//! generators over the other modules and one checker per statement.
//!
//! Every check evaluates its hypotheses first. An instance whose
//! hypotheses fail is reported as a skip with the reason; a FAIL means the
//! implementation contradicts a theorem and is always a bug.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use parking_lot::Mutex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bilimits::{is_pseudopullback_square, projections, pseudopullback, Corners, FunctorSquare};
use crate::cosimplicial::{basic_fibration, basic_fibration_with, validate_coherence, AugCosimplicial3};
use crate::descent::{
    classify_diagram, DescCategory, DescOptions, DescentClass, FinSetDescent,
};
use crate::error::{DescentError, HarnessError};
use crate::fincat::{
    is_faithful, is_full, Category, Cell, DynCategory, Enumerated, FinCategory, Functor, NatIso,
};
use crate::finset::{all_functions, FinFunction, FinSet, FinSetCat};
use crate::monadic::benabou_roubaud_with;
use crate::slices::{Cone, PullbackCategory, Slice, SliceMor};
use crate::tamper::Tamper;
use crate::LimitError;

/// Largest `|E|`, `|B|` for exhaustive generation.
pub const EXHAUSTIVE_CEILING: usize = 3;

/// Fiber sizes a restriction may select from.
const FIBER_SIZES: [usize; 3] = [0, 1, 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Embedding,
    Galois,
    PseudoPullback,
    BenabouRoubaud,
}

impl Kind {
    pub const ALL: [Kind; 4] = [
        Kind::Embedding,
        Kind::Galois,
        Kind::PseudoPullback,
        Kind::BenabouRoubaud,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Embedding => "embedding",
            Kind::Galois => "galois",
            Kind::PseudoPullback => "pseudopullback",
            Kind::BenabouRoubaud => "br",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HarnessError::UnknownKind(s.to_owned()))
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// ---------------------------------------------------------------- posets

/// A small poset, used as a table-backed category with objects `"0"`,
/// `"1"`, … and morphisms `"i<j"`, `"id_i"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Poset {
    Chain(usize),
    Discrete(usize),
}

impl Poset {
    pub fn len(self) -> usize {
        match self {
            Poset::Chain(n) | Poset::Discrete(n) => n,
        }
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }

    pub fn le(self, i: usize, j: usize) -> bool {
        match self {
            Poset::Chain(_) => i <= j,
            Poset::Discrete(_) => i == j,
        }
    }

    fn arrow(i: usize, j: usize) -> String {
        if i == j {
            format!("id_{i}")
        } else {
            format!("{i}<{j}")
        }
    }

    pub fn category(self) -> FinCategory {
        let n = self.len();
        let objects: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut morphisms = Vec::new();
        let mut compose = BTreeMap::new();
        for i in 0..n {
            for j in (0..n).filter(|&j| self.le(i, j)) {
                morphisms.push((Self::arrow(i, j), i.to_string(), j.to_string()));
                for k in (0..n).filter(|&k| self.le(j, k)) {
                    compose.insert((Self::arrow(j, k), Self::arrow(i, j)), Self::arrow(i, k));
                }
            }
        }
        let identity = (0..n).map(|i| (i.to_string(), Self::arrow(i, i))).collect();
        FinCategory::new(format!("{self:?}"), objects, morphisms, identity, compose)
            .expect("poset tables are well formed")
    }

    /// Monotone maps to `other`, as object maps, in lexicographic order.
    pub fn monotone_maps(self, other: Poset) -> Vec<Vec<usize>> {
        let digits = vec![(0..other.len()).collect::<Vec<_>>(); self.len()];
        crate::finset::odometer(&digits)
            .into_iter()
            .filter(|f| self.is_monotone(other, f))
            .collect()
    }

    fn is_monotone(self, other: Poset, f: &[usize]) -> bool {
        (0..self.len())
            .all(|i| (0..self.len()).all(|j| !self.le(i, j) || other.le(f[i], f[j])))
    }

    /// Does `f` reflect the order (i.e. is the functor full)?
    pub fn reflects(self, other: Poset, f: &[usize]) -> bool {
        (0..self.len())
            .all(|i| (0..self.len()).all(|j| !other.le(f[i], f[j]) || self.le(i, j)))
    }
}

type StrFunctor = Functor<String, String, String, String>;

fn poset_functor(name: String, src: DynCategory<String, String>, tgt: DynCategory<String, String>, map: Vec<usize>) -> StrFunctor {
    let (m1, m2) = (map.clone(), map);
    let s = src.clone();
    let at = move |m: &[usize], x: &String| m[x.parse::<usize>().expect("poset object")];
    Functor::new(
        name,
        src,
        tgt,
        move |x: &String| at(&m1, x).to_string(),
        move |f: &String| Poset::arrow(at(&m2, &s.dom(f)), at(&m2, &s.cod(f))),
    )
}

/// The constant diagram on `level`, augmented by `d: base → level`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableDiagram {
    pub base: Poset,
    pub level: Poset,
    pub d: Vec<usize>,
}

struct BuiltTable {
    c0: DynCategory<String, String>,
    c: DynCategory<String, String>,
    diagram: AugCosimplicial3<String, String>,
}

impl TableDiagram {
    fn build(&self, name: &str) -> BuiltTable {
        let c0: DynCategory<String, String> = Arc::new(self.base.category().with_name(format!("{name}0")));
        let c: DynCategory<String, String> = Arc::new(self.level.category().with_name(format!("{name}1")));
        let id = Functor::identity(c.clone());
        let d = poset_functor(format!("{name}(d)"), c0.clone(), c.clone(), self.d.clone());
        let faces = [id.clone(), id.clone(), id.clone(), id.clone(), id.clone(), id];
        let diagram = AugCosimplicial3::strict(name, [c.clone(), c.clone(), c.clone()], faces, Some((c0.clone(), d)));
        BuiltTable { c0, c, diagram }
    }
}

// ------------------------------------------------------------- instances

/// A transformation `α: A ⇒ B` of truncated augmented diagrams, given
/// by data from which both diagrams are rebuilt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagramMap {
    /// `B` is the basic fibration of `p`; `A` is its full sub-diagram on
    /// the maps all of whose fibers have a size in `upper` (levels 1–3)
    /// or in `base` (level 0); `α` is the inclusion.
    FiberSizes {
        p: FinFunction,
        base: BTreeSet<usize>,
        upper: BTreeSet<usize>,
    },
    /// Constant diagrams on posets; `α` is `alpha0` at level 0 and
    /// `alpha1` at every other level.
    Tables {
        a: TableDiagram,
        b: TableDiagram,
        alpha0: Vec<usize>,
        alpha1: Vec<usize>,
    },
}

pub type DiscreteMor = crate::bilimits::CommaMor<FinSet, FinFunction, FinSet, FinFunction, FinFunction>;
pub type SigmaMor =
    crate::bilimits::CommaMor<FinSet, FinFunction, FinFunction, SliceMor<FinFunction>, FinFunction>;

/// A pseudopullback square of pullback-preserving functors and a morphism
/// `p` of its corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PseudoPullbackInstance {
    /// All four corners `FinSet`, all functors identities.
    Trivial(FinFunction),
    /// Corner `FinSet ×ψ FinSet≤1` of `Id` and the inclusion of sets with
    /// at most one element.
    Discrete(DiscreteMor),
    /// Corner `FinSet ×ψ FinSet/K` of `Id` and `Σ_K`.
    Sigma { k: usize, p: SigmaMor },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Embedding(DiagramMap),
    Galois(DiagramMap),
    PseudoPullback(PseudoPullbackInstance),
    BenabouRoubaud(FinFunction),
}

impl Instance {
    pub fn kind(&self) -> Kind {
        match self {
            Instance::Embedding(_) => Kind::Embedding,
            Instance::Galois(_) => Kind::Galois,
            Instance::PseudoPullback(_) => Kind::PseudoPullback,
            Instance::BenabouRoubaud(_) => Kind::BenabouRoubaud,
        }
    }

    /// One-line description, stable across runs.
    pub fn label(&self) -> String {
        fn sizes(s: &BTreeSet<usize>) -> String {
            let v: Vec<String> = s.iter().map(|k| k.to_string()).collect();
            format!("{{{}}}", v.join(","))
        }
        fn map(m: &DiagramMap) -> String {
            match m {
                DiagramMap::FiberSizes { p, base, upper } => {
                    format!("p={:?} S0={} S={}", p.indices(), sizes(base), sizes(upper))
                }
                DiagramMap::Tables { a, b, alpha0, alpha1 } => format!(
                    "A=({:?}→{:?} by {:?}) B=({:?}→{:?} by {:?}) α0={alpha0:?} α1={alpha1:?}",
                    a.base, a.level, a.d, b.base, b.level, b.d
                ),
            }
        }
        match self {
            Instance::Embedding(m) | Instance::Galois(m) => map(m),
            Instance::PseudoPullback(PseudoPullbackInstance::Trivial(p)) => {
                format!("trivial p={:?}→{}", p.indices(), p.cod().len())
            }
            Instance::PseudoPullback(PseudoPullbackInstance::Discrete(p)) => {
                format!("discrete p=({:?}, {:?})", p.u, p.v)
            }
            Instance::PseudoPullback(PseudoPullbackInstance::Sigma { k, p }) => {
                format!("sigma K={k} p=({:?}, {:?})", p.u, p.v)
            }
            Instance::BenabouRoubaud(p) => format!("p={:?}→{}", p.indices(), p.cod().len()),
        }
    }
}

/// Size parameters for [`generate_instances`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    /// Largest `|E|` and `|B|`.
    pub max_size: usize,
    pub exhaustive: bool,
    /// Number of instances drawn when not exhaustive.
    pub samples: usize,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            max_size: EXHAUSTIVE_CEILING,
            exhaustive: true,
            samples: 32,
            seed: 0,
        }
    }
}

/// All maps `E → B` with `|E|, |B| ≤ max`, ordered by `(|B|, |E|, map)`.
pub fn all_maps(max: usize) -> Vec<FinFunction> {
    let mut out = Vec::new();
    for b in 0..=max {
        for e in 0..=max {
            out.extend(all_functions(&FinSet::range(e), &FinSet::range(b)));
        }
    }
    out
}

pub fn surjections(max: usize) -> Vec<FinFunction> {
    all_maps(max).into_iter().filter(|p| p.is_surjective()).collect()
}

fn subsets(of: &[usize]) -> Vec<BTreeSet<usize>> {
    (0..1u32 << of.len())
        .map(|mask| {
            of.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &s)| s)
                .collect()
        })
        .collect()
}

/// `(S0, S)` with `S0 ⊆ S ⊆ {0, 1, 2}`.
fn size_pairs() -> Vec<(BTreeSet<usize>, BTreeSet<usize>)> {
    let mut out = Vec::new();
    for upper in subsets(&FIBER_SIZES) {
        let u: Vec<usize> = upper.iter().copied().collect();
        for base in subsets(&u) {
            out.push((base, upper.clone()));
        }
    }
    out
}

const TABLE_SHAPES: [Poset; 4] = [
    Poset::Chain(0),
    Poset::Chain(1),
    Poset::Discrete(2),
    Poset::Chain(2),
];

/// Every strictly natural `α` between constant poset diagrams with at most
/// two objects per level.
pub fn table_maps() -> Vec<DiagramMap> {
    let mut out = Vec::new();
    for &a0 in &TABLE_SHAPES {
        for &a1 in &TABLE_SHAPES {
            for &b0 in &TABLE_SHAPES {
                for &b1 in &TABLE_SHAPES {
                    for da in a0.monotone_maps(a1) {
                        for db in b0.monotone_maps(b1) {
                            for u0 in a0.monotone_maps(b0) {
                                for u1 in a1.monotone_maps(b1) {
                                    let natural =
                                        (0..a0.len()).all(|x| u1[da[x]] == db[u0[x]]);
                                    if natural {
                                        out.push(DiagramMap::Tables {
                                            a: TableDiagram { base: a0, level: a1, d: da.clone() },
                                            b: TableDiagram { base: b0, level: b1, d: db.clone() },
                                            alpha0: u0.clone(),
                                            alpha1: u1,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Full sub-diagrams of the constant diagram on the chain `0 < 1 < 2`
/// (augmented by the identity), one per pair `K0 ⊆ K` of object sets.
pub fn chain_subdiagrams() -> Vec<DiagramMap> {
    let whole = Poset::Chain(3);
    let b = TableDiagram { base: whole, level: whole, d: vec![0, 1, 2] };
    let mut out = Vec::new();
    for k in subsets(&[0, 1, 2]) {
        let k: Vec<usize> = k.into_iter().collect();
        for k0 in subsets(&k) {
            let k0: Vec<usize> = k0.into_iter().collect();
            let d = k0.iter().map(|x| k.iter().position(|y| y == x).unwrap()).collect();
            out.push(DiagramMap::Tables {
                a: TableDiagram { base: Poset::Chain(k0.len()), level: Poset::Chain(k.len()), d },
                b: b.clone(),
                alpha0: k0.clone(),
                alpha1: k.clone(),
            });
        }
    }
    out
}

fn fiber_size_maps(maps: &[FinFunction]) -> Vec<DiagramMap> {
    let pairs = size_pairs();
    maps.iter()
        .flat_map(|p| {
            pairs.iter().map(move |(base, upper)| DiagramMap::FiberSizes {
                p: p.clone(),
                base: base.clone(),
                upper: upper.clone(),
            })
        })
        .collect()
}

fn random_map(rng: &mut ChaCha8Rng, max: usize) -> FinFunction {
    let b = rng.gen_range(0..=max);
    let e = if b == 0 { 0 } else { rng.gen_range(0..=max) };
    let map = (0..e).map(|_| rng.gen_range(0..b)).collect();
    FinFunction::new(FinSet::range(e), FinSet::range(b), map).expect("in range")
}

fn random_sizes(rng: &mut ChaCha8Rng) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let upper: BTreeSet<usize> = FIBER_SIZES.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    let base = upper.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    (base, upper)
}

fn sample<T: Clone>(rng: &mut ChaCha8Rng, pool: &[T], n: usize) -> Vec<T> {
    if pool.is_empty() {
        return Vec::new();
    }
    (0..n).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect()
}

/// Morphisms of `cat` between objects enumerated at `bound`.
fn morphisms<C: Category + ?Sized>(cat: &C, bound: usize) -> Vec<C::Mor> {
    let objs = cat.objects(bound).items;
    let mut out = Vec::new();
    for x in &objs {
        for y in &objs {
            out.extend(cat.hom(x, y));
        }
    }
    out
}

/// Bound for the structural hypotheses on `α` (naturality, faithfulness,
/// fullness). At level 3 the slices sit over `E ×_B E ×_B E`, which is too
/// large to sweep at the classification bound.
const PRECONDITION_BOUND: usize = 1;

/// Enumeration bound for the morphisms `p` of pseudopullback corners.
const CORNER_BOUND: usize = 2;
/// Largest `K` for the `Σ_K` shape.
const MAX_SIGMA_BASE: usize = 2;

fn pseudopullback_pool(max: usize) -> Vec<PseudoPullbackInstance> {
    let mut out: Vec<_> = all_maps(max.min(2))
        .into_iter()
        .map(PseudoPullbackInstance::Trivial)
        .collect();
    let disc = DiscreteShape::new();
    out.extend(morphisms(&*disc.b, CORNER_BOUND).into_iter().map(PseudoPullbackInstance::Discrete));
    for k in 1..=MAX_SIGMA_BASE {
        let sig = SigmaShape::new(k);
        out.extend(
            morphisms(&*sig.b, CORNER_BOUND)
                .into_iter()
                // keep the sweep small: maps between objects of size ≤ 2 over K
                .filter(|p| p.u.dom().len() + p.u.cod().len() <= 3)
                .map(|p| PseudoPullbackInstance::Sigma { k, p }),
        );
    }
    out
}

/// Deterministic instance stream. Exhaustive mode enumerates everything up
/// to `max_size` (capped at [`EXHAUSTIVE_CEILING`]); otherwise `samples`
/// instances are drawn from a ChaCha stream seeded by `seed`.
pub fn generate_instances(kind: Kind, params: &GenParams) -> Result<Vec<Instance>, HarnessError> {
    if params.exhaustive && params.max_size > EXHAUSTIVE_CEILING {
        return Err(HarnessError::SizeCeiling {
            requested: params.max_size,
            ceiling: EXHAUSTIVE_CEILING,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.samples;
    let max = params.max_size;
    Ok(match (kind, params.exhaustive) {
        (Kind::BenabouRoubaud, true) => all_maps(max).into_iter().map(Instance::BenabouRoubaud).collect(),
        (Kind::BenabouRoubaud, false) => (0..n)
            .map(|_| Instance::BenabouRoubaud(random_map(&mut rng, max)))
            .collect(),
        (Kind::Embedding, true) => {
            let mut maps = fiber_size_maps(&all_maps(max));
            maps.extend(table_maps());
            maps.extend(chain_subdiagrams());
            maps.into_iter().map(Instance::Embedding).collect()
        }
        (Kind::Galois, true) => {
            let mut maps = fiber_size_maps(&surjections(max));
            maps.extend(table_maps());
            maps.extend(chain_subdiagrams());
            maps.into_iter().map(Instance::Galois).collect()
        }
        (Kind::Embedding | Kind::Galois, false) => {
            let tables: Vec<DiagramMap> = table_maps().into_iter().chain(chain_subdiagrams()).collect();
            (0..n)
                .map(|i| {
                    let m = if i % 2 == 0 {
                        let mut p = random_map(&mut rng, max);
                        while kind == Kind::Galois && !p.is_surjective() {
                            p = random_map(&mut rng, max);
                        }
                        let (base, upper) = random_sizes(&mut rng);
                        DiagramMap::FiberSizes { p, base, upper }
                    } else {
                        sample(&mut rng, &tables, 1).remove(0)
                    };
                    if kind == Kind::Galois {
                        Instance::Galois(m)
                    } else {
                        Instance::Embedding(m)
                    }
                })
                .collect()
        }
        (Kind::PseudoPullback, true) => pseudopullback_pool(max)
            .into_iter()
            .map(Instance::PseudoPullback)
            .collect(),
        (Kind::PseudoPullback, false) => sample(&mut rng, &pseudopullback_pool(max), n)
            .into_iter()
            .map(Instance::PseudoPullback)
            .collect(),
    })
}

// ---------------------------------------------------------------- checks

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// A theorem-violation incident.
    Fail(String),
    /// A hypothesis did not hold; the reason names it.
    Skip(String),
}

impl Outcome {
    pub fn tag(&self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail(_) => "FAIL",
            Outcome::Skip(_) => "SKIP",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CaseReport {
    pub instance: Instance,
    pub outcome: Outcome,
    /// Verdicts computed on the way, e.g. `A=Descent B=Effective`.
    pub detail: String,
    /// Some enumeration was truncated at the bound.
    pub within_bound: bool,
}

fn skip(instance: &Instance, why: impl Into<String>) -> CaseReport {
    CaseReport {
        instance: instance.clone(),
        outcome: Outcome::Skip(why.into()),
        detail: String::new(),
        within_bound: false,
    }
}

fn error_case(instance: &Instance, e: impl fmt::Display) -> CaseReport {
    CaseReport {
        instance: instance.clone(),
        outcome: Outcome::Fail(format!("error: {e}")),
        detail: String::new(),
        within_bound: false,
    }
}

/// Shared state of a harness run: the bound and a cache of the finite-set
/// descent structures, which many instances share.
pub struct Harness {
    pub bound: usize,
    descent: Mutex<HashMap<FinFunction, Arc<(FinSetDescent, DescentClass, bool)>>>,
}

type SliceDesc = Arc<DescCategory<FinFunction, SliceMor<FinFunction>>>;
type DiagramFunctors<O, M> = [Functor<O, M, O, M>; 4];

/// Objectwise flags of `α`, or the level where it fails to be faithful.
struct Flags {
    faithful: Result<(), String>,
    fully_faithful: Result<(), String>,
}

fn flags<O: Cell, M: Cell>(alpha: &DiagramFunctors<O, M>, bound: usize) -> Flags {
    let mut faithful = Ok(());
    let mut ff = Ok(());
    for (level, a) in alpha.iter().enumerate() {
        let f = is_faithful(a, bound);
        if !f.holds && faithful.is_ok() {
            faithful = Err(format!("α{level} is not faithful: {:?}", f.witness));
        }
        if ff.is_ok() {
            if !f.holds {
                ff = Err(format!("α{level} is not faithful"));
            } else {
                let g = is_full(a, bound);
                if !g.holds {
                    ff = Err(format!("α{level} is not full: {:?}", g.witness));
                }
            }
        }
    }
    Flags {
        faithful,
        fully_faithful: ff,
    }
}

/// `α_{n+1} ∘ A(f) = B(f) ∘ α_n` on every enumerated object and morphism,
/// for every face and the augmentation.
fn strictly_natural<O: Cell, M: Cell>(
    a: &AugCosimplicial3<O, M>,
    b: &AugCosimplicial3<O, M>,
    alpha: &DiagramFunctors<O, M>,
    bound: usize,
) -> Result<(), String> {
    let (Some(aa), Some(ba)) = (&a.aug, &b.aug) else {
        return Err("diagram is not augmented".into());
    };
    let faces = [
        ("d", &aa.d, &ba.d, 0, 1),
        ("d0", &a.d0, &b.d0, 1, 2),
        ("d1", &a.d1, &b.d1, 1, 2),
        ("s0", &a.s0, &b.s0, 2, 1),
        ("∂0", &a.del0, &b.del0, 2, 3),
        ("∂1", &a.del1, &b.del1, 2, 3),
        ("∂2", &a.del2, &b.del2, 2, 3),
    ];
    for (name, fa, fb, from, to) in faces {
        let objs = fa.source.objects(bound).items;
        for x in &objs {
            if alpha[to].obj(&fa.obj(x)) != fb.obj(&alpha[from].obj(x)) {
                return Err(format!("α is not natural for {name} at {x:?}"));
            }
            for y in &objs {
                for m in fa.source.hom(x, y) {
                    if alpha[to].mor(&fa.mor(&m)) != fb.mor(&alpha[from].mor(&m)) {
                        return Err(format!("α is not natural for {name} at {m:?}"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Both diagrams of a [`DiagramMap`] with their descent categories, `α`,
/// and the class of `B`.
struct Built<O: Cell, M: Cell> {
    a: Arc<DescCategory<O, M>>,
    b: Arc<DescCategory<O, M>>,
    alpha: DiagramFunctors<O, M>,
    b_class: DescentClass,
    b_within: bool,
}

fn class_of<O: Cell, M: Cell>(
    desc: Arc<DescCategory<O, M>>,
    bound: usize,
) -> Result<(DescentClass, bool), DescentError> {
    let c = classify_diagram(desc, bound, None)?;
    Ok((c.class, c.within_bound()))
}

impl Harness {
    pub fn new(bound: usize) -> Self {
        Self {
            bound,
            descent: Mutex::new(HashMap::new()),
        }
    }

    fn finset(&self, p: &FinFunction) -> Result<Arc<(FinSetDescent, DescentClass, bool)>, DescentError> {
        if let Some(hit) = self.descent.lock().get(p) {
            return Ok(hit.clone());
        }
        let fd = FinSetDescent::new(p.clone())?;
        let c = fd.classify(self.bound)?;
        let entry = Arc::new((fd, c.class, c.within_bound()));
        self.descent.lock().insert(p.clone(), entry.clone());
        Ok(entry)
    }

    fn build_fiber(
        &self,
        p: &FinFunction,
        base: &BTreeSet<usize>,
        upper: &BTreeSet<usize>,
    ) -> Result<Built<FinFunction, SliceMor<FinFunction>>, DescentError> {
        let entry = self.finset(p)?;
        let (fd, b_class, b_within) = (&entry.0, entry.1, entry.2);
        let (s0, s) = (base.clone(), upper.clone());
        let a = fd.restricted(
            format!("A[{:?}]", p.indices()),
            move |level, x: &FinFunction| {
                let keep = if level == 0 { &s0 } else { &s };
                x.fiber_sizes().iter().all(|k| keep.contains(k))
            },
        );
        let b: SliceDesc = fd.desc.clone();
        let (ad, bd) = (a.diagram(), b.diagram());
        let inc = |sub: &DynCategory<_, _>, whole: &DynCategory<_, _>| Functor::inclusion(sub.clone(), whole.clone());
        let (a0, b0) = (&ad.aug.as_ref().expect("augmented").c0, &bd.aug.as_ref().expect("augmented").c0);
        let alpha = [
            inc(a0, b0),
            inc(&ad.c1, &bd.c1),
            inc(&ad.c2, &bd.c2),
            inc(&ad.c3, &bd.c3),
        ];
        Ok(Built { a, b, alpha, b_class, b_within })
    }

    fn build_tables(
        &self,
        a: &TableDiagram,
        b: &TableDiagram,
        alpha0: &[usize],
        alpha1: &[usize],
    ) -> Result<Built<String, String>, DescentError> {
        let (ta, tb) = (a.build("A"), b.build("B"));
        let f0 = poset_functor("α0".into(), ta.c0.clone(), tb.c0.clone(), alpha0.to_vec());
        let f1 = poset_functor("α1".into(), ta.c.clone(), tb.c.clone(), alpha1.to_vec());
        let alpha = [f0, f1.clone(), f1.clone(), f1];
        let ad = Arc::new(DescCategory::new(ta.diagram, DescOptions::default()));
        let bd = Arc::new(DescCategory::new(tb.diagram, DescOptions::default()));
        let (b_class, b_within) = class_of(bd.clone(), self.bound)?;
        Ok(Built { a: ad, b: bd, alpha, b_class, b_within })
    }

    /// If `α` is objectwise faithful and `B` is of almost descent, so is
    /// `A`; if `α` is objectwise fully faithful and `B` is of descent, so
    /// is `A`.
    pub fn check_embedding(&self, inst: &Instance) -> CaseReport {
        let Instance::Embedding(map) = inst else {
            return skip(inst, "not an embedding instance");
        };
        match map {
            DiagramMap::FiberSizes { p, base, upper } => match self.build_fiber(p, base, upper) {
                Ok(b) => self.embedding_body(inst, b),
                Err(e) => error_case(inst, e),
            },
            DiagramMap::Tables { a, b, alpha0, alpha1 } => match self.build_tables(a, b, alpha0, alpha1) {
                Ok(b) => self.embedding_body(inst, b),
                Err(e) => error_case(inst, e),
            },
        }
    }

    fn embedding_body<O: Cell, M: Cell>(&self, inst: &Instance, built: Built<O, M>) -> CaseReport {
        let bound = self.bound;
        if let Err(why) = strictly_natural(built.a.diagram(), built.b.diagram(), &built.alpha, PRECONDITION_BOUND) {
            return skip(inst, why);
        }
        let report = validate_coherence(built.a.diagram(), bound);
        if !report.is_empty() {
            return skip(inst, format!("A is not a coherent sub-diagram: {:?}", report.failures[0]));
        }
        let fl = flags(&built.alpha, PRECONDITION_BOUND);
        let want = match (&fl.faithful, &fl.fully_faithful, built.b_class) {
            (_, Ok(()), c) if c >= DescentClass::Descent => DescentClass::Descent,
            (Ok(()), _, c) if c >= DescentClass::Almost => DescentClass::Almost,
            (Err(why), _, _) => return skip(inst, why.clone()),
            _ => return skip(inst, format!("B is only {}", built.b_class)),
        };
        let (a_class, a_within) = match class_of(built.a.clone(), bound) {
            Ok(c) => c,
            Err(e) => return error_case(inst, e),
        };
        let detail = format!(
            "A={a_class} B={} α={}",
            built.b_class,
            if fl.fully_faithful.is_ok() { "ff" } else { "faithful" }
        );
        let outcome = if a_class >= want {
            Outcome::Pass
        } else {
            Outcome::Fail(format!("A is {a_class}, expected at least {want}"))
        };
        CaseReport {
            instance: inst.clone(),
            outcome,
            detail,
            within_bound: a_within || built.b_within,
        }
    }

    /// For `α` objectwise fully faithful and `B` effective: `A` is
    /// effective iff the square `(A(d), α0, α1, B(d))` is a pseudopullback.
    pub fn check_galois(&self, inst: &Instance) -> CaseReport {
        let Instance::Galois(map) = inst else {
            return skip(inst, "not a Galois instance");
        };
        match map {
            DiagramMap::FiberSizes { p, base, upper } => match self.build_fiber(p, base, upper) {
                Ok(b) => self.galois_body(inst, b),
                Err(e) => error_case(inst, e),
            },
            DiagramMap::Tables { a, b, alpha0, alpha1 } => match self.build_tables(a, b, alpha0, alpha1) {
                Ok(b) => self.galois_body(inst, b),
                Err(e) => error_case(inst, e),
            },
        }
    }

    fn galois_body<O: Cell, M: Cell>(&self, inst: &Instance, built: Built<O, M>) -> CaseReport {
        let bound = self.bound;
        if built.b_class != DescentClass::Effective {
            return skip(inst, format!("B is only {}", built.b_class));
        }
        if let Err(why) = strictly_natural(built.a.diagram(), built.b.diagram(), &built.alpha, PRECONDITION_BOUND) {
            return skip(inst, why);
        }
        let report = validate_coherence(built.a.diagram(), bound);
        if !report.is_empty() {
            return skip(inst, format!("A is not a coherent sub-diagram: {:?}", report.failures[0]));
        }
        if let Err(why) = flags(&built.alpha, PRECONDITION_BOUND).fully_faithful {
            return skip(inst, why);
        }
        let (a_class, a_within) = match class_of(built.a.clone(), bound) {
            Ok(c) => c,
            Err(e) => return error_case(inst, e),
        };
        let top = built.a.diagram().aug.as_ref().expect("augmented").d.clone();
        let bottom = built.b.diagram().aug.as_ref().expect("augmented").d.clone();
        let [left, right, ..] = built.alpha.clone();
        let b1 = right.target.clone();
        let (b1b, r1, r2, t1, t2) = (b1.clone(), right.clone(), right.clone(), top.clone(), top.clone());
        // α is strictly natural, so the filler is an identity
        let filler = NatIso::new(
            "α_d",
            top.then(&right),
            left.then(&bottom),
            move |x: &O| b1.identity(&r1.obj(&t1.obj(x))),
            move |x: &O| b1b.identity(&r2.obj(&t2.obj(x))),
        );
        let sq = FunctorSquare { top, left, right, bottom, filler };
        let v = match is_pseudopullback_square(&sq, bound) {
            Ok(v) => v,
            Err(e) => return error_case(inst, e),
        };
        let effective = a_class == DescentClass::Effective;
        let detail = format!("A={a_class} pseudopullback={}", v.holds);
        let outcome = if effective == v.holds {
            Outcome::Pass
        } else {
            Outcome::Fail(format!(
                "A effective = {effective} but square pseudopullback = {} ({:?})",
                v.holds, v.report.level
            ))
        };
        CaseReport {
            instance: inst.clone(),
            outcome,
            detail,
            within_bound: a_within || built.b_within || v.within_bound(),
        }
    }

    /// If the square is a pseudopullback of pullback-preserving functors,
    /// `S(p)`, `Z(p)` are effective and `FS(p)` is of descent, then `p` is
    /// effective.
    pub fn check_pseudopullback_theorem(&self, inst: &Instance) -> CaseReport {
        let Instance::PseudoPullback(pp) = inst else {
            return skip(inst, "not a pseudopullback instance");
        };
        let bound = self.bound;
        match pp {
            PseudoPullbackInstance::Trivial(p) => {
                let sets = Arc::new(FinSetCat);
                let dynsets: DynCategory<FinSet, FinFunction> = sets.clone();
                let id = Functor::identity(dynsets.clone());
                let sq = FunctorSquare {
                    top: id.clone(),
                    left: id.clone(),
                    right: id.clone(),
                    bottom: id.clone(),
                    filler: NatIso::from_forward(crate::NatTrans::identity(&id)),
                };
                pseudopullback_case(inst, &sq, [&sets, &sets, &sets, &sets].map(|c| c.clone()), p, bound)
            }
            PseudoPullbackInstance::Discrete(p) => {
                let s = DiscreteShape::new();
                pseudopullback_case_mixed(inst, &s.square(), (&s.b, &s.c, &s.d, &s.e), p, bound)
            }
            PseudoPullbackInstance::Sigma { k, p } => {
                let s = SigmaShape::new(*k);
                pseudopullback_case_mixed(inst, &s.square(), (&s.b, &s.c, &s.d, &s.e), p, bound)
            }
        }
    }

    pub fn check_benabou_roubaud(&self, inst: &Instance) -> CaseReport {
        let Instance::BenabouRoubaud(p) = inst else {
            return skip(inst, "not a Bénabou–Roubaud instance");
        };
        match benabou_roubaud_with(p, self.bound, None) {
            Ok(br) => CaseReport {
                instance: inst.clone(),
                outcome: if br.holds() {
                    Outcome::Pass
                } else {
                    Outcome::Fail(format!("{br:?}"))
                },
                detail: format!(
                    "K'={} desc={} em={} classes={}",
                    br.level, br.desc_objects, br.em_objects, br.em_iso_classes
                ),
                within_bound: br.report.within_bound(),
            },
            Err(e) => error_case(inst, e),
        }
    }

    pub fn check(&self, inst: &Instance) -> CaseReport {
        match inst.kind() {
            Kind::Embedding => self.check_embedding(inst),
            Kind::Galois => self.check_galois(inst),
            Kind::PseudoPullback => self.check_pseudopullback_theorem(inst),
            Kind::BenabouRoubaud => self.check_benabou_roubaud(inst),
        }
    }

    /// Check all instances in parallel; the result keeps input order.
    pub fn run(&self, instances: &[Instance]) -> Vec<CaseReport> {
        instances.par_iter().map(|i| self.check(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

pub fn tally(cases: &[CaseReport]) -> Tally {
    let mut t = Tally::default();
    for c in cases {
        match c.outcome {
            Outcome::Pass => t.pass += 1,
            Outcome::Fail(_) => t.fail += 1,
            Outcome::Skip(_) => t.skip += 1,
        }
    }
    t
}

// ------------------------------------------------- pseudopullback shapes

/// Finite sets with at most `max` elements; closed under pullback for
/// `max ≤ 1`.
#[derive(Debug, Clone, Copy)]
pub struct BoundedFinSet {
    pub max: usize,
}

impl Category for BoundedFinSet {
    type Obj = FinSet;
    type Mor = FinFunction;

    fn name(&self) -> String {
        format!("FinSet≤{}", self.max)
    }

    fn objects(&self, bound: usize) -> Enumerated<FinSet> {
        Enumerated::complete((0..=bound.min(self.max)).map(FinSet::range).collect())
            .complete_if(bound >= self.max)
    }

    fn hom(&self, x: &FinSet, y: &FinSet) -> Vec<FinFunction> {
        FinSetCat.hom(x, y)
    }

    fn dom(&self, f: &FinFunction) -> FinSet {
        f.dom().clone()
    }

    fn cod(&self, f: &FinFunction) -> FinSet {
        f.cod().clone()
    }

    fn identity(&self, x: &FinSet) -> FinFunction {
        FinFunction::identity(x)
    }

    fn try_compose(&self, g: &FinFunction, f: &FinFunction) -> Option<FinFunction> {
        FinSetCat.try_compose(g, f)
    }

    fn contains(&self, x: &FinSet) -> bool {
        x.len() <= self.max
    }

    fn inverse(&self, f: &FinFunction) -> Option<FinFunction> {
        f.inverse()
    }

    fn isomorphisms(&self, x: &FinSet, y: &FinSet) -> Vec<FinFunction> {
        FinSetCat.isomorphisms(x, y)
    }

    fn find_isomorphism(&self, x: &FinSet, y: &FinSet) -> Option<(FinFunction, FinFunction)> {
        FinSetCat.find_isomorphism(x, y)
    }
}

impl PullbackCategory for BoundedFinSet {
    fn pullback(&self, f: &FinFunction, g: &FinFunction) -> Result<Cone<FinSet, FinFunction>, LimitError> {
        let cone = FinSetCat.pullback(f, g)?;
        if cone.apex.len() > self.max {
            return Err(LimitError::BadCone(format!(
                "pullback has {} elements, more than {}",
                cone.apex.len(),
                self.max
            )));
        }
        Ok(cone)
    }

    fn mediate(
        &self,
        cone: &Cone<FinSet, FinFunction>,
        q1: &FinFunction,
        q2: &FinFunction,
    ) -> Result<FinFunction, LimitError> {
        FinSetCat.mediate(cone, q1, q2)
    }

    fn slice_objects(&self, base: &FinSet, bound: usize) -> Enumerated<FinFunction> {
        let all = FinSetCat.slice_objects(base, bound.min(self.max));
        let complete = bound >= self.max;
        all.filter(|x| x.dom().len() <= self.max).complete_if(complete)
    }

    fn slice_hom(&self, x: &FinFunction, y: &FinFunction) -> Vec<FinFunction> {
        FinSetCat.slice_hom(x, y)
    }

    fn slice_isomorphisms(&self, x: &FinFunction, y: &FinFunction) -> Vec<FinFunction> {
        FinSetCat.slice_isomorphisms(x, y)
    }

    fn slice_find_iso(&self, x: &FinFunction, y: &FinFunction) -> Option<FinFunction> {
        FinSetCat.slice_find_iso(x, y)
    }
}

type DiscreteCorner = crate::bilimits::Comma<FinSet, FinFunction, FinSet, FinFunction, FinSet, FinFunction>;
type SigmaCorner =
    crate::bilimits::Comma<FinSet, FinFunction, FinFunction, SliceMor<FinFunction>, FinSet, FinFunction>;

/// `FinSet ×ψ FinSet≤1` over `Id` and the inclusion `J`.
pub struct DiscreteShape {
    pub b: Arc<DiscreteCorner>,
    pub c: Arc<FinSetCat>,
    pub d: Arc<BoundedFinSet>,
    pub e: Arc<FinSetCat>,
}

impl DiscreteShape {
    pub fn new() -> Self {
        let c = Arc::new(FinSetCat);
        let d = Arc::new(BoundedFinSet { max: 1 });
        let sets: DynCategory<FinSet, FinFunction> = c.clone();
        let small: DynCategory<FinSet, FinFunction> = d.clone();
        let j = Functor::new("J", small, sets.clone(), |x: &FinSet| x.clone(), |f: &FinFunction| f.clone());
        let b = pseudopullback(Functor::identity(sets), j)
            .expect("shared codomain")
            .with_pullbacks(Corners { c: c.clone(), d: d.clone(), e: c.clone() });
        Self { b: Arc::new(b), e: c.clone(), c, d }
    }

    pub fn square(&self) -> FunctorSquare<
        crate::bilimits::CommaObj<FinSet, FinSet, FinFunction>,
        DiscreteMor,
        FinSet,
        FinFunction,
        FinSet,
        FinFunction,
        FinSet,
        FinFunction,
    > {
        corner_square(self.b.clone())
    }
}

impl Default for DiscreteShape {
    fn default() -> Self {
        Self::new()
    }
}

/// `FinSet ×ψ FinSet/K` over `Id` and `Σ_K`, with `K = {0, …, k-1}`.
pub struct SigmaShape {
    pub b: Arc<SigmaCorner>,
    pub c: Arc<FinSetCat>,
    pub d: Arc<Slice<FinSetCat>>,
    pub e: Arc<FinSetCat>,
}

impl SigmaShape {
    pub fn new(k: usize) -> Self {
        let c = Arc::new(FinSetCat);
        let d = Arc::new(Slice::new(c.clone(), FinSet::range(k)));
        let sets: DynCategory<FinSet, FinFunction> = c.clone();
        let over: DynCategory<FinFunction, SliceMor<FinFunction>> = d.clone();
        let sigma = Functor::new(
            "Σ_K",
            over,
            sets.clone(),
            |x: &FinFunction| x.dom().clone(),
            |h: &SliceMor<FinFunction>| h.arrow.clone(),
        );
        let b = pseudopullback(Functor::identity(sets), sigma)
            .expect("shared codomain")
            .with_pullbacks(Corners { c: c.clone(), d: d.clone(), e: c.clone() });
        Self { b: Arc::new(b), e: c.clone(), c, d }
    }

    #[allow(clippy::type_complexity)]
    pub fn square(&self) -> FunctorSquare<
        crate::bilimits::CommaObj<FinSet, FinFunction, FinFunction>,
        SigmaMor,
        FinSet,
        FinFunction,
        FinFunction,
        SliceMor<FinFunction>,
        FinSet,
        FinFunction,
    > {
        corner_square(self.b.clone())
    }
}

/// The defining square of a pseudopullback: projections and filler.
#[allow(clippy::type_complexity)]
fn corner_square<O1: Cell, M1: Cell, O2: Cell, M2: Cell, Oe: Cell, Me: Cell>(
    b: Arc<crate::bilimits::Comma<O1, M1, O2, M2, Oe, Me>>,
) -> FunctorSquare<
    crate::bilimits::CommaObj<O1, O2, Me>,
    crate::bilimits::CommaMor<O1, M1, O2, M2, Me>,
    O1,
    M1,
    O2,
    M2,
    Oe,
    Me,
> {
    let (f, g) = (b.f.clone(), b.g.clone());
    let pr = projections(b);
    FunctorSquare {
        top: pr.p1,
        left: pr.p2,
        right: f,
        bottom: g,
        filler: NatIso::from_forward(pr.filler),
    }
}

/// Classify `p` in any category with pullbacks through its basic
/// fibration (generic hom filter, blind essential surjectivity).
pub fn classify_in<C: PullbackCategory + 'static>(
    cat: Arc<C>,
    p: &C::Mor,
    bound: usize,
) -> Result<(DescentClass, bool), DescentError> {
    let fib = basic_fibration(cat, p.clone())?;
    class_of(Arc::new(DescCategory::new(fib.diagram, DescOptions::default())), bound)
}

/// `None` if `F` carries every chosen pullback of arrows between objects
/// enumerated at `bound` to a pullback; otherwise the offending cospan.
pub fn preserves_pullbacks<C1, C2>(
    f: &Functor<C1::Obj, C1::Mor, C2::Obj, C2::Mor>,
    src: &C1,
    tgt: &C2,
    bound: usize,
) -> Option<String>
where
    C1: PullbackCategory + ?Sized,
    C2: PullbackCategory + ?Sized,
{
    let objs = src.objects(bound).items;
    for z in &objs {
        let into: Vec<C1::Mor> = objs.iter().flat_map(|x| src.hom(x, z)).collect();
        for a in &into {
            for b in &into {
                let Ok(cone) = src.pullback(a, b) else {
                    return Some(format!("no pullback of {a:?}, {b:?} in the source"));
                };
                let ok = tgt
                    .pullback(&f.mor(a), &f.mor(b))
                    .and_then(|q| tgt.mediate(&q, &f.mor(&cone.pr1), &f.mor(&cone.pr2)))
                    .is_ok_and(|m| tgt.is_iso(&m));
                if !ok {
                    return Some(format!("{} does not preserve the pullback of {a:?}, {b:?}", f.name));
                }
            }
        }
    }
    None
}

/// Bound used for the pullback-preservation hypotheses.
const PRESERVATION_BOUND: usize = 2;

fn pseudopullback_case<O: Cell, M: Cell, C: PullbackCategory<Obj = O, Mor = M> + 'static>(
    inst: &Instance,
    sq: &FunctorSquare<O, M, O, M, O, M, O, M>,
    cats: [Arc<C>; 4],
    p: &M,
    bound: usize,
) -> CaseReport {
    let [b, c, d, e] = cats;
    pseudopullback_case_mixed(inst, sq, (&b, &c, &d, &e), p, bound)
}

#[allow(clippy::type_complexity)]
fn pseudopullback_case_mixed<Ob, Mb, O1, M1, O2, M2, Oe, Me, B, C, D, E>(
    inst: &Instance,
    sq: &FunctorSquare<Ob, Mb, O1, M1, O2, M2, Oe, Me>,
    cats: (&Arc<B>, &Arc<C>, &Arc<D>, &Arc<E>),
    p: &Mb,
    bound: usize,
) -> CaseReport
where
    Ob: Cell,
    Mb: Cell,
    O1: Cell,
    M1: Cell,
    O2: Cell,
    M2: Cell,
    Oe: Cell,
    Me: Cell,
    B: PullbackCategory<Obj = Ob, Mor = Mb> + 'static,
    C: PullbackCategory<Obj = O1, Mor = M1> + 'static,
    D: PullbackCategory<Obj = O2, Mor = M2> + 'static,
    E: PullbackCategory<Obj = Oe, Mor = Me> + 'static,
{
    let (b, c, d, e) = cats;
    match is_pseudopullback_square(sq, bound) {
        Ok(v) if v.holds => {}
        Ok(v) => return skip(inst, format!("square is not a pseudopullback: {:?}", v.report.level)),
        Err(err) => return skip(inst, err.to_string()),
    }
    let pb = PRESERVATION_BOUND.min(bound);
    let preserved = [
        preserves_pullbacks(&sq.top, &**b, &**c, pb),
        preserves_pullbacks(&sq.left, &**b, &**d, pb),
        preserves_pullbacks(&sq.right, &**c, &**e, pb),
        preserves_pullbacks(&sq.bottom, &**d, &**e, pb),
    ];
    if let Some(why) = preserved.into_iter().flatten().next() {
        return skip(inst, why);
    }
    let sp = sq.top.mor(p);
    let run = || -> Result<CaseReport, DescentError> {
        let (s, s_w) = classify_in(c.clone(), &sp, bound)?;
        let (z, z_w) = classify_in(d.clone(), &sq.left.mor(p), bound)?;
        let (fs, fs_w) = classify_in(e.clone(), &sq.right.mor(&sp), bound)?;
        let hyp = format!("S(p)={s} Z(p)={z} FS(p)={fs}");
        if s != DescentClass::Effective || z != DescentClass::Effective || fs < DescentClass::Descent {
            return Ok(skip(inst, hyp));
        }
        let (pc, p_w) = classify_in(b.clone(), p, bound)?;
        Ok(CaseReport {
            instance: inst.clone(),
            outcome: if pc == DescentClass::Effective {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("p is only {pc}"))
            },
            detail: format!("{hyp} p={pc}"),
            within_bound: s_w || z_w || fs_w || p_w,
        })
    };
    run().unwrap_or_else(|err| error_case(inst, err))
}

// --------------------------------------------------------------- mutants

#[derive(Debug, Clone)]
pub struct MutationOutcome {
    pub tamper: Tamper,
    pub detected: bool,
    /// The suite that caught it.
    pub detected_by: &'static str,
    pub detail: String,
}

/// Data violating only the cocycle need two points in each fiber over `E`,
/// so descent-level corruptions are classified at least at this bound.
pub const DESCENT_MUTATION_BOUND: usize = 4;

/// Inject every corruption into the `2 → 1` instance and run the check
/// that should catch it.
pub fn mutation_suite(bound: usize) -> Vec<MutationOutcome> {
    let p = FinFunction::to_point(&FinSet::range(2));
    Tamper::ALL
        .into_par_iter()
        .map(|t| mutation_case(&p, t, bound))
        .collect()
}

fn mutation_case(p: &FinFunction, t: Tamper, bound: usize) -> MutationOutcome {
    let outcome = |detected: bool, detected_by, detail: String| MutationOutcome {
        tamper: t,
        detected,
        detected_by,
        detail,
    };
    match t {
        Tamper::BrokenMu | Tamper::BrokenTriangle => match benabou_roubaud_with(p, bound, Some(t)) {
            Ok(br) => outcome(!br.holds(), "benabou-roubaud", br.incidents.first().cloned().unwrap_or_default()),
            Err(e) => outcome(true, "benabou-roubaud", e.to_string()),
        },
        Tamper::InvertedTheta | Tamper::SwappedFaces => {
            match basic_fibration_with(Arc::new(FinSetCat), p.clone(), Some(t)) {
                Ok(fib) => {
                    let r = validate_coherence(&fib.diagram, bound);
                    let detail = r.failures.first().map(|f| format!("{f:?}")).unwrap_or_default();
                    outcome(!r.is_empty(), "coherence", detail)
                }
                Err(e) => outcome(true, "coherence", e.to_string()),
            }
        }
        Tamper::DroppedCocycle | Tamper::UnconstrainedDescentMaps => {
            let run = || -> Result<DescentClass, DescentError> {
                let fd = FinSetDescent::with_options(p.clone(), DescOptions::tampered(t))?;
                Ok(fd.classify(bound.max(DESCENT_MUTATION_BOUND))?.class)
            };
            match run() {
                Ok(c) => outcome(c != DescentClass::Effective, "effective-descent", format!("classified {c}")),
                Err(e) => outcome(true, "effective-descent", e.to_string()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_tables_validate() {
        for shape in [Poset::Chain(0), Poset::Chain(3), Poset::Discrete(2)] {
            let cat = shape.category();
            assert!(crate::fincat::validate_category(&cat).is_empty(), "{shape:?}");
        }
        assert_eq!(Poset::Chain(2).monotone_maps(Poset::Chain(2)).len(), 3);
        assert_eq!(Poset::Discrete(2).monotone_maps(Poset::Chain(2)).len(), 4);
        assert_eq!(Poset::Chain(2).monotone_maps(Poset::Discrete(2)).len(), 2);
    }

    #[test]
    fn chain_subdiagrams_are_all_pairs() {
        // each of the three objects is in K0, in K ∖ K0, or outside K
        assert_eq!(chain_subdiagrams().len(), 27);
    }

    #[test]
    fn bounded_finset_has_pullbacks_below_one() {
        let small = BoundedFinSet { max: 1 };
        let one = FinSet::range(1);
        let f = FinFunction::identity(&one);
        assert_eq!(small.pullback(&f, &f).unwrap().apex.len(), 1);
        assert!(small.objects(5).complete);
        assert_eq!(small.objects(5).items.len(), 2);
    }

    #[test]
    fn identity_table_embedding_passes() {
        let t = TableDiagram { base: Poset::Chain(2), level: Poset::Chain(2), d: vec![0, 1] };
        let inst = Instance::Embedding(DiagramMap::Tables {
            a: t.clone(),
            b: t,
            alpha0: vec![0, 1],
            alpha1: vec![0, 1],
        });
        let r = Harness::new(2).check(&inst);
        assert_eq!(r.outcome, Outcome::Pass, "{r:?}");
    }

    #[test]
    fn galois_engineered_negative() {
        let p = FinFunction::to_point(&FinSet::range(2));
        let inst = Instance::Galois(DiagramMap::FiberSizes {
            p,
            base: [0].into(),
            upper: [0, 1].into(),
        });
        let r = Harness::new(2).check(&inst);
        assert_eq!(r.outcome, Outcome::Pass, "{r:?}");
        assert!(r.detail.contains("pseudopullback=false"), "{}", r.detail);
        assert!(!r.detail.starts_with("A=Effective"), "{}", r.detail);
    }

    #[test]
    fn trivial_square_passes() {
        let p = FinFunction::to_point(&FinSet::range(2));
        let r = Harness::new(2).check(&Instance::PseudoPullback(PseudoPullbackInstance::Trivial(p)));
        assert_eq!(r.outcome, Outcome::Pass, "{r:?}");
    }

    #[test]
    fn generation_is_deterministic() {
        let params = GenParams { max_size: 4, exhaustive: false, samples: 10, seed: 7 };
        for kind in Kind::ALL {
            let a = generate_instances(kind, &params).unwrap();
            assert_eq!(a, generate_instances(kind, &params).unwrap());
            assert_eq!(a.len(), 10);
        }
        let too_big = GenParams { max_size: 4, ..GenParams::default() };
        assert!(generate_instances(Kind::Galois, &too_big).is_err());
    }
}
