//! Pseudopullbacks and comma categories of functors, and the decision
//! whether a square of functors is a pseudopullback.

use std::fmt;
use std::sync::Arc;

use crate::error::{BilimitError, LimitError};
use crate::fincat::{
    is_equivalence, Category, Cell, DynCategory, Enumerated, EquivalenceLevel, EquivalenceReport,
    Functor, NatIso, NatTrans,
};
use crate::slices::{Cone, PullbackCategory};

/// `(c, d, φ: F c → G d)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommaObj<O1, O2, Me> {
    pub c: O1,
    pub d: O2,
    pub phi: Me,
}

impl<O1: fmt::Debug, O2: fmt::Debug, Me: fmt::Debug> fmt::Debug for CommaObj<O1, O2, Me> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}, φ={:?})", self.c, self.d, self.phi)
    }
}

/// `(u, v)` with `G(v) ∘ φ = φ' ∘ F(u)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommaMor<O1, M1, O2, M2, Me> {
    pub src: CommaObj<O1, O2, Me>,
    pub tgt: CommaObj<O1, O2, Me>,
    pub u: M1,
    pub v: M2,
}

impl<O1, M1: fmt::Debug, O2, M2: fmt::Debug, Me> fmt::Debug for CommaMor<O1, M1, O2, M2, Me> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.u, self.v)
    }
}

type PbCat<O, M> = Arc<dyn PullbackCategory<Obj = O, Mor = M>>;

/// Chosen pullbacks of the three corners, when the comma category should
/// itself have pullbacks (computed componentwise).
pub struct Corners<O1, M1, O2, M2, Oe, Me> {
    pub c: PbCat<O1, M1>,
    pub d: PbCat<O2, M2>,
    pub e: PbCat<Oe, Me>,
}

impl<O1, M1, O2, M2, Oe, Me> Clone for Corners<O1, M1, O2, M2, Oe, Me> {
    fn clone(&self) -> Self {
        Self {
            c: self.c.clone(),
            d: self.d.clone(),
            e: self.e.clone(),
        }
    }
}

/// The comma category `F ↓ G`, or the pseudopullback when `invertible`.
pub struct Comma<O1, M1, O2, M2, Oe, Me> {
    pub f: Functor<O1, M1, Oe, Me>,
    pub g: Functor<O2, M2, Oe, Me>,
    pub invertible: bool,
    corners: Option<Corners<O1, M1, O2, M2, Oe, Me>>,
}

pub type PseudoPullback<O1, M1, O2, M2, Oe, Me> = Comma<O1, M1, O2, M2, Oe, Me>;

type Obj<O1, O2, Me> = CommaObj<O1, O2, Me>;
type Mor<O1, M1, O2, M2, Me> = CommaMor<O1, M1, O2, M2, Me>;

fn check_cospan<O1: Cell, M1: Cell, O2: Cell, M2: Cell, Oe: Cell, Me: Cell>(
    f: &Functor<O1, M1, Oe, Me>,
    g: &Functor<O2, M2, Oe, Me>,
) -> Result<(), BilimitError> {
    let (a, b) = (f.target.name(), g.target.name());
    if a != b {
        return Err(BilimitError::CodomainMismatch(a, b));
    }
    Ok(())
}

pub fn pseudopullback<O1: Cell, M1: Cell, O2: Cell, M2: Cell, Oe: Cell, Me: Cell>(
    f: Functor<O1, M1, Oe, Me>,
    g: Functor<O2, M2, Oe, Me>,
) -> Result<PseudoPullback<O1, M1, O2, M2, Oe, Me>, BilimitError> {
    check_cospan(&f, &g)?;
    Ok(Comma {
        f,
        g,
        invertible: true,
        corners: None,
    })
}

pub fn comma<O1: Cell, M1: Cell, O2: Cell, M2: Cell, Oe: Cell, Me: Cell>(
    f: Functor<O1, M1, Oe, Me>,
    g: Functor<O2, M2, Oe, Me>,
) -> Result<Comma<O1, M1, O2, M2, Oe, Me>, BilimitError> {
    check_cospan(&f, &g)?;
    Ok(Comma {
        f,
        g,
        invertible: false,
        corners: None,
    })
}

impl<O1: Cell, M1: Cell, O2: Cell, M2: Cell, Oe: Cell, Me: Cell> Comma<O1, M1, O2, M2, Oe, Me> {
    /// Give the comma category chosen pullbacks. They exist when `F` and
    /// `G` preserve pullbacks; otherwise `pullback` reports the failure.
    pub fn with_pullbacks(mut self, corners: Corners<O1, M1, O2, M2, Oe, Me>) -> Self {
        self.corners = Some(corners);
        self
    }

    fn c(&self) -> &DynCategory<O1, M1> {
        &self.f.source
    }

    fn d(&self) -> &DynCategory<O2, M2> {
        &self.g.source
    }

    fn e(&self) -> &DynCategory<Oe, Me> {
        &self.f.target
    }

    pub fn is_morphism(&self, x: &Obj<O1, O2, Me>, y: &Obj<O1, O2, Me>, u: &M1, v: &M2) -> bool {
        let e = self.e();
        let lhs = e.try_compose(&self.g.mor(v), &x.phi);
        lhs.is_some() && lhs == e.try_compose(&y.phi, &self.f.mor(u))
    }

    pub fn object(&self, c: O1, d: O2, phi: Me) -> Option<Obj<O1, O2, Me>> {
        let e = self.e();
        let ok = e.dom(&phi) == self.f.obj(&c)
            && e.cod(&phi) == self.g.obj(&d)
            && (!self.invertible || e.is_iso(&phi));
        ok.then_some(CommaObj { c, d, phi })
    }
}

impl<O1: Cell, M1: Cell, O2: Cell, M2: Cell, Oe: Cell, Me: Cell> Category
    for Comma<O1, M1, O2, M2, Oe, Me>
{
    type Obj = Obj<O1, O2, Me>;
    type Mor = Mor<O1, M1, O2, M2, Me>;

    fn name(&self) -> String {
        let op = if self.invertible { "×ψ" } else { "↓" };
        format!("({} {op} {})", self.f.name, self.g.name)
    }

    fn objects(&self, bound: usize) -> Enumerated<Self::Obj> {
        let (cs, ds) = (self.c().objects(bound), self.d().objects(bound));
        let e = self.e();
        let mut items = Vec::new();
        for c in &cs.items {
            let fc = self.f.obj(c);
            for d in &ds.items {
                let gd = self.g.obj(d);
                let phis = if self.invertible {
                    e.isomorphisms(&fc, &gd)
                } else {
                    e.hom(&fc, &gd)
                };
                items.extend(phis.into_iter().map(|phi| CommaObj {
                    c: c.clone(),
                    d: d.clone(),
                    phi,
                }));
            }
        }
        Enumerated {
            items,
            complete: cs.complete && ds.complete,
        }
    }

    fn hom(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor> {
        let vs = self.d().hom(&x.d, &y.d);
        let mut out = Vec::new();
        for u in self.c().hom(&x.c, &y.c) {
            for v in &vs {
                if self.is_morphism(x, y, &u, v) {
                    out.push(CommaMor {
                        src: x.clone(),
                        tgt: y.clone(),
                        u: u.clone(),
                        v: v.clone(),
                    });
                }
            }
        }
        out
    }

    fn dom(&self, m: &Self::Mor) -> Self::Obj {
        m.src.clone()
    }

    fn cod(&self, m: &Self::Mor) -> Self::Obj {
        m.tgt.clone()
    }

    fn identity(&self, x: &Self::Obj) -> Self::Mor {
        CommaMor {
            src: x.clone(),
            tgt: x.clone(),
            u: self.c().identity(&x.c),
            v: self.d().identity(&x.d),
        }
    }

    fn try_compose(&self, g: &Self::Mor, f: &Self::Mor) -> Option<Self::Mor> {
        if f.tgt != g.src {
            return None;
        }
        Some(CommaMor {
            src: f.src.clone(),
            tgt: g.tgt.clone(),
            u: self.c().try_compose(&g.u, &f.u)?,
            v: self.d().try_compose(&g.v, &f.v)?,
        })
    }

    fn contains(&self, x: &Self::Obj) -> bool {
        self.c().contains(&x.c)
            && self.d().contains(&x.d)
            && self.object(x.c.clone(), x.d.clone(), x.phi.clone()).is_some()
    }

    fn inverse(&self, m: &Self::Mor) -> Option<Self::Mor> {
        Some(CommaMor {
            src: m.tgt.clone(),
            tgt: m.src.clone(),
            u: self.c().inverse(&m.u)?,
            v: self.d().inverse(&m.v)?,
        })
    }
}

impl<O1: Cell, M1: Cell, O2: Cell, M2: Cell, Oe: Cell, Me: Cell> PullbackCategory
    for Comma<O1, M1, O2, M2, Oe, Me>
{
    /// Componentwise in `C` and `D`; the structure map of the apex is the
    /// induced map `F(c_P) → Q` into the chosen pullback `Q` of the
    /// `G`-images, followed by the inverse of `G(d_P) → Q`.
    fn pullback(
        &self,
        f: &Self::Mor,
        g: &Self::Mor,
    ) -> Result<Cone<Self::Obj, Self::Mor>, LimitError> {
        let k = self
            .corners
            .as_ref()
            .ok_or_else(|| LimitError::BadCone("no chosen pullbacks in the corners".into()))?;
        if f.tgt != g.tgt {
            return Err(LimitError::CodomainMismatch(format!("{:?} vs {:?}", f.tgt, g.tgt)));
        }
        let pc = k.c.pullback(&f.u, &g.u)?;
        let pd = k.d.pullback(&f.v, &g.v)?;
        let q = k.e.pullback(&self.g.mor(&f.v), &self.g.mor(&g.v))?;
        let to_q = k.e.mediate(&q, &self.g.mor(&pd.pr1), &self.g.mor(&pd.pr2))?;
        let from_q = k
            .e
            .inverse(&to_q)
            .ok_or_else(|| LimitError::BadCone("G does not preserve this pullback".into()))?;
        let leg1 = k.e.compose(&f.src.phi, &self.f.mor(&pc.pr1));
        let leg2 = k.e.compose(&g.src.phi, &self.f.mor(&pc.pr2));
        let x = k.e.mediate(&q, &leg1, &leg2)?;
        let apex = CommaObj {
            c: pc.apex.clone(),
            d: pd.apex.clone(),
            phi: k.e.compose(&from_q, &x),
        };
        if self.invertible && !k.e.is_iso(&apex.phi) {
            return Err(LimitError::BadCone("F does not preserve this pullback".into()));
        }
        let pr1 = CommaMor {
            src: apex.clone(),
            tgt: f.src.clone(),
            u: pc.pr1,
            v: pd.pr1,
        };
        let pr2 = CommaMor {
            src: apex.clone(),
            tgt: g.src.clone(),
            u: pc.pr2,
            v: pd.pr2,
        };
        Ok(Cone {
            apex,
            pr1,
            pr2,
            left: f.clone(),
            right: g.clone(),
        })
    }

    fn mediate(
        &self,
        cone: &Cone<Self::Obj, Self::Mor>,
        q1: &Self::Mor,
        q2: &Self::Mor,
    ) -> Result<Self::Mor, LimitError> {
        let k = self
            .corners
            .as_ref()
            .ok_or_else(|| LimitError::BadCone("no chosen pullbacks in the corners".into()))?;
        if q1.src != q2.src {
            return Err(LimitError::BadCone("legs have different domains".into()));
        }
        let pc = k.c.pullback(&cone.left.u, &cone.right.u)?;
        let pd = k.d.pullback(&cone.left.v, &cone.right.v)?;
        Ok(CommaMor {
            src: q1.src.clone(),
            tgt: cone.apex.clone(),
            u: k.c.mediate(&pc, &q1.u, &q2.u)?,
            v: k.d.mediate(&pd, &q1.v, &q2.v)?,
        })
    }
}

pub type CommaFunctor<O1, M1, O2, M2, Me, Ox, Mx> =
    Functor<Obj<O1, O2, Me>, Mor<O1, M1, O2, M2, Me>, Ox, Mx>;

/// The projections `P1`, `P2` and the filler `F P1 ⇒ G P2` (componentwise `φ`).
pub struct Projections<O1, M1, O2, M2, Oe, Me> {
    pub p1: CommaFunctor<O1, M1, O2, M2, Me, O1, M1>,
    pub p2: CommaFunctor<O1, M1, O2, M2, Me, O2, M2>,
    pub filler: NatTrans<Obj<O1, O2, Me>, Mor<O1, M1, O2, M2, Me>, Oe, Me>,
}

pub fn projections<O1: Cell, M1: Cell, O2: Cell, M2: Cell, Oe: Cell, Me: Cell>(
    cat: Arc<Comma<O1, M1, O2, M2, Oe, Me>>,
) -> Projections<O1, M1, O2, M2, Oe, Me> {
    let src: DynCategory<_, _> = cat.clone();
    let p1 = Functor::new(
        "P1",
        src.clone(),
        cat.f.source.clone(),
        |x: &Obj<O1, O2, Me>| x.c.clone(),
        |m: &Mor<O1, M1, O2, M2, Me>| m.u.clone(),
    );
    let p2 = Functor::new(
        "P2",
        src,
        cat.g.source.clone(),
        |x: &Obj<O1, O2, Me>| x.d.clone(),
        |m: &Mor<O1, M1, O2, M2, Me>| m.v.clone(),
    );
    let filler = NatTrans::new("φ", p1.then(&cat.f), p2.then(&cat.g), |x: &Obj<O1, O2, Me>| {
        x.phi.clone()
    });
    Projections { p1, p2, filler }
}

/// A square of functors filled by an iso
///
/// ```text
///      top
///   A ─────▶ C
///   │        │
/// left  γ    right        γ: right∘top ≅ bottom∘left
///   ▼        ▼
///   D ─────▶ E
///     bottom
/// ```
pub struct FunctorSquare<Oa, Ma, O1, M1, O2, M2, Oe, Me> {
    pub top: Functor<Oa, Ma, O1, M1>,
    pub left: Functor<Oa, Ma, O2, M2>,
    pub right: Functor<O1, M1, Oe, Me>,
    pub bottom: Functor<O2, M2, Oe, Me>,
    pub filler: NatIso<Oa, Ma, Oe, Me>,
}

/// The square's corner compared with the pseudopullback of `right` and
/// `bottom`; the square is a pseudopullback iff this is an equivalence.
pub struct PseudoPullbackVerdict<Oa, Ma, O1, M1, O2, M2, Me> {
    pub holds: bool,
    pub report: EquivalenceReport<Oa, Ma, Obj<O1, O2, Me>, Mor<O1, M1, O2, M2, Me>>,
}

impl<Oa: Cell, Ma: Cell, O1: Cell, M1: Cell, O2: Cell, M2: Cell, Me: Cell>
    PseudoPullbackVerdict<Oa, Ma, O1, M1, O2, M2, Me>
{
    pub fn within_bound(&self) -> bool {
        self.report.within_bound()
    }
}

impl<Oa: Cell, Ma: Cell, O1: Cell, M1: Cell, O2: Cell, M2: Cell, Oe: Cell, Me: Cell>
    FunctorSquare<Oa, Ma, O1, M1, O2, M2, Oe, Me>
{
    /// `a ↦ (top a, left a, γ_a)`.
    pub fn comparison(
        &self,
        target: Arc<PseudoPullback<O1, M1, O2, M2, Oe, Me>>,
    ) -> CommaFunctorFrom<Oa, Ma, O1, M1, O2, M2, Me> {
        let (top, left, gamma) = (self.top.clone(), self.left.clone(), self.filler.clone());
        let obj = move |a: &Oa| CommaObj {
            c: top.obj(a),
            d: left.obj(a),
            phi: gamma.at(a),
        };
        let obj2 = obj.clone();
        let (top, left, src) = (self.top.clone(), self.left.clone(), self.top.source.clone());
        Functor::new(
            "⟨top, left, γ⟩",
            self.top.source.clone(),
            target as DynCategory<_, _>,
            obj,
            move |m: &Ma| CommaMor {
                src: obj2(&src.dom(m)),
                tgt: obj2(&src.cod(m)),
                u: top.mor(m),
                v: left.mor(m),
            },
        )
    }
}

pub type CommaFunctorFrom<Oa, Ma, O1, M1, O2, M2, Me> =
    Functor<Oa, Ma, Obj<O1, O2, Me>, Mor<O1, M1, O2, M2, Me>>;

pub fn is_pseudopullback_square<
    Oa: Cell,
    Ma: Cell,
    O1: Cell,
    M1: Cell,
    O2: Cell,
    M2: Cell,
    Oe: Cell,
    Me: Cell,
>(
    sq: &FunctorSquare<Oa, Ma, O1, M1, O2, M2, Oe, Me>,
    bound: usize,
) -> Result<PseudoPullbackVerdict<Oa, Ma, O1, M1, O2, M2, Me>, BilimitError> {
    if sq.top.target.name() != sq.right.source.name()
        || sq.left.target.name() != sq.bottom.source.name()
    {
        return Err(BilimitError::Malformed("sides do not compose".into()));
    }
    let pp = Arc::new(pseudopullback(sq.right.clone(), sq.bottom.clone())?);
    let cmp = sq.comparison(pp);
    if let Some(x) = cmp
        .source
        .objects(bound)
        .items
        .iter()
        .find(|a| !cmp.target.contains(&cmp.obj(a)))
    {
        return Err(BilimitError::Malformed(format!("filler at {x:?} is not an iso")));
    }
    let report = is_equivalence(&cmp, bound, None);
    Ok(PseudoPullbackVerdict {
        holds: report.level == EquivalenceLevel::Equivalence,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{FinCategory, FullSubcategory};
    use crate::finset::{FinFunction, FinSet, FinSetCat};

    fn obj_picker(
        one: &DynCategory<String, String>,
        e: &DynCategory<String, String>,
        x: &'static str,
    ) -> Functor<String, String, String, String> {
        Functor::new(
            format!("pick {x}"),
            one.clone(),
            e.clone(),
            move |_: &String| x.to_owned(),
            move |_: &String| format!("id_{x}"),
        )
    }

    /// `a ⇄ b` with inverse isos `f`, `g`, plus a separate object `c`.
    fn iso_pair() -> FinCategory {
        let s = |x: &str| x.to_string();
        let morphisms = vec![
            (s("id_a"), s("a"), s("a")),
            (s("id_b"), s("b"), s("b")),
            (s("id_c"), s("c"), s("c")),
            (s("f"), s("a"), s("b")),
            (s("g"), s("b"), s("a")),
        ];
        let identity = ["a", "b", "c"].map(|x| (s(x), format!("id_{x}"))).into_iter().collect();
        let mut compose = std::collections::BTreeMap::new();
        for (m, d, c) in &morphisms {
            compose.insert((format!("id_{c}"), m.clone()), m.clone());
            compose.insert((m.clone(), format!("id_{d}")), m.clone());
        }
        compose.insert((s("g"), s("f")), s("id_a"));
        compose.insert((s("f"), s("g")), s("id_b"));
        FinCategory::new("iso", vec![s("a"), s("b"), s("c")], morphisms, identity, compose).unwrap()
    }

    #[test]
    fn points_give_isos_between_them() {
        let one: DynCategory<String, String> = Arc::new(FinCategory::terminal());
        let e: DynCategory<String, String> = Arc::new(iso_pair());
        let pp = pseudopullback(obj_picker(&one, &e, "a"), obj_picker(&one, &e, "b")).unwrap();
        let objs = pp.objects(1).items;
        assert_eq!(objs.len(), 1);
        assert_eq!(objs[0].phi, "f");
        let pp = pseudopullback(obj_picker(&one, &e, "a"), obj_picker(&one, &e, "c")).unwrap();
        assert!(pp.objects(1).items.is_empty());
    }

    #[test]
    fn comma_keeps_non_invertible_arrows() {
        let one: DynCategory<String, String> = Arc::new(FinCategory::terminal());
        let chain: DynCategory<String, String> =
            Arc::new(FinCategory::poset(["0", "1"], &[("0", "1")]).unwrap());
        let (f, g) = (obj_picker(&one, &chain, "0"), obj_picker(&one, &chain, "1"));
        assert_eq!(comma(f.clone(), g.clone()).unwrap().objects(1).items.len(), 1);
        assert!(pseudopullback(f, g).unwrap().objects(1).items.is_empty());
    }

    #[test]
    fn codomain_mismatch_is_rejected() {
        let one: DynCategory<String, String> = Arc::new(FinCategory::terminal());
        let e: DynCategory<String, String> = Arc::new(iso_pair());
        let f = obj_picker(&one, &e, "a");
        let g = Functor::identity(one.clone());
        assert!(matches!(
            pseudopullback(f, g),
            Err(BilimitError::CodomainMismatch(..))
        ));
    }

    #[test]
    fn pseudopullback_along_identity_is_equivalent_to_the_source() {
        let sets: DynCategory<FinSet, FinFunction> = Arc::new(FinSetCat);
        let id = Functor::identity(sets.clone());
        let pp = Arc::new(pseudopullback(id.clone(), id.clone()).unwrap());
        let pr = projections(pp.clone());
        assert!(pr.p1.check_laws(2).is_empty());
        assert!(pr.filler.check_naturality(2).is_empty());
        let report = is_equivalence(&pr.p1, 2, None);
        assert_eq!(report.level, EquivalenceLevel::Equivalence);
    }

    #[test]
    fn corner_equal_to_the_pseudopullback_is_a_pseudopullback() {
        let sets: DynCategory<FinSet, FinFunction> = Arc::new(FinSetCat);
        let small: DynCategory<FinSet, FinFunction> = Arc::new(FullSubcategory::new(
            "FinSet≤1",
            sets.clone(),
            |x: &FinSet| x.len() <= 1,
        ));
        let j = Functor::inclusion(small, sets.clone());
        let id = Functor::identity(sets.clone());
        let pp = Arc::new(pseudopullback(id.clone(), j.clone()).unwrap());
        let pr = projections(pp.clone());
        let pp_dyn: DynCategory<_, _> = pp.clone();
        let gamma = NatIso::from_forward(pr.filler.clone());
        let sq = FunctorSquare {
            top: pr.p1.clone(),
            left: pr.p2.clone(),
            right: id.clone(),
            bottom: j.clone(),
            filler: gamma,
        };
        assert!(is_pseudopullback_square(&sq, 2).unwrap().holds);

        // drop the iso class of the empty set from the corner
        let sub: DynCategory<_, _> = Arc::new(FullSubcategory::new(
            "missing ∅",
            pp_dyn.clone(),
            |x: &CommaObj<FinSet, FinSet, FinFunction>| !x.c.is_empty(),
        ));
        let inc = Functor::inclusion(sub, pp_dyn);
        let sq = FunctorSquare {
            top: inc.then(&pr.p1),
            left: inc.then(&pr.p2),
            right: id,
            bottom: j,
            filler: NatIso::from_forward(pr.filler.whisker_pre(&inc)),
        };
        let v = is_pseudopullback_square(&sq, 2).unwrap();
        assert!(!v.holds);
        let missing = v.report.essentially_surjective.unwrap().witness.unwrap();
        assert!(missing.object.c.is_empty());
    }

    #[test]
    fn componentwise_pullbacks() {
        let sets: DynCategory<FinSet, FinFunction> = Arc::new(FinSetCat);
        let id = Functor::identity(sets.clone());
        let pb: PbCat<FinSet, FinFunction> = Arc::new(FinSetCat);
        let pp = pseudopullback(id.clone(), id).unwrap().with_pullbacks(Corners {
            c: pb.clone(),
            d: pb.clone(),
            e: pb,
        });
        let objs = pp.objects(2).items;
        let two = objs.iter().find(|x| x.c.len() == 2 && x.phi.indices() == [1, 0]).unwrap();
        let pt = objs.iter().find(|x| x.c.len() == 1).unwrap();
        let to_pt = pp.hom(two, pt).pop().unwrap();
        let cone = pp.pullback(&to_pt, &to_pt).unwrap();
        assert_eq!(cone.apex.c.len(), 4);
        assert!(pp.contains(&cone.apex));
        let m = pp.mediate(&cone, &pp.identity(two), &pp.identity(two)).unwrap();
        assert_eq!(pp.compose(&cone.pr1, &m), pp.identity(two));
    }
}
