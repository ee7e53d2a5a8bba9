//! The category of finite sets with chosen limits and colimits.
//!
//! Every construction returns a canonically labelled object, so iterated
//! limits agree up to a canonical isomorphism and never on the nose. Those
//! canonical comparisons are what the cosimplicial constraint cells are
//! built from.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::error::LimitError;
use crate::fincat::{Category, Enumerated};
use crate::slices::{Cone, PullbackCategory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinSetError {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("mapping has {got} entries but the domain has {expected} elements")]
    WrongArity { expected: usize, got: usize },
    #[error("image index {index} out of range for a codomain of size {size}")]
    OutOfRange { index: usize, size: usize },
    #[error("element `{0}` is mapped twice")]
    MappedTwice(String),
    #[error("element `{0}` is not mapped")]
    Unmapped(String),
    #[error("codomains differ: {0} vs {1}")]
    CodomainMismatch(FinSet, FinSet),
    #[error("maps are not composable: {0} is not {1}")]
    NotComposable(FinSet, FinSet),
    #[error("cone does not commute over the cospan")]
    NotCommuting,
    #[error("cone legs have different domains")]
    ConeDomainMismatch,
}

/// Label of the ordered pair `(a,b)`.
///
/// Components that are themselves well-formed labels (balanced parentheses,
/// no bare comma, no backslash) are written verbatim, so nested pairs read
/// naturally as `((x,e),(e0,e1))`. Anything else is backslash-escaped.
pub fn pair_label(a: &str, b: &str) -> String {
    format!("({},{})", escape_component(a), escape_component(b))
}

/// Inverse of [`pair_label`].
pub fn parse_pair_label(label: &str) -> Option<(String, String)> {
    let inner = label.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0usize;
    let mut escaped = false;
    let mut split = None;
    for (i, c) in inner.char_indices() {
        if escaped {
            escaped = false;
            continue;
        }
        match c {
            '\\' => escaped = true,
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            ',' if depth == 0 => {
                if split.is_some() {
                    return None;
                }
                split = Some(i);
            }
            _ => {}
        }
    }
    if escaped || depth != 0 {
        return None;
    }
    let at = split?;
    Some((unescape(&inner[..at]), unescape(&inner[at + 1..])))
}

fn is_safe_component(s: &str) -> bool {
    let mut depth = 0i64;
    for c in s.chars() {
        match c {
            '\\' => return false,
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            ',' if depth == 0 => return false,
            _ => {}
        }
    }
    depth == 0
}

fn escape_component(s: &str) -> String {
    if is_safe_component(s) {
        return s.to_owned();
    }
    let mut out = String::with_capacity(s.len() + 4);
    for c in s.chars() {
        if matches!(c, '\\' | '(' | ')' | ',') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(next) = chars.next() {
                out.push(next);
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// A finite set: an ordered, duplicate-free list of element labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSet {
    elems: Arc<[String]>,
}

impl FinSet {
    pub fn new<I, S>(labels: I) -> Result<Self, FinSetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elems: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::with_capacity(elems.len());
        for e in &elems {
            if !seen.insert(e.as_str()) {
                return Err(FinSetError::DuplicateLabel(e.clone()));
            }
        }
        Ok(Self {
            elems: elems.into(),
        })
    }

    fn from_unique(elems: Vec<String>) -> Self {
        Self {
            elems: elems.into(),
        }
    }

    pub fn empty() -> Self {
        Self::from_unique(Vec::new())
    }

    /// The set `{0, 1, ..., n-1}`.
    pub fn range(n: usize) -> Self {
        Self::from_unique((0..n).map(|i| i.to_string()).collect())
    }

    /// The one-point set `{*}`.
    pub fn point() -> Self {
        Self::from_unique(vec!["*".to_owned()])
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elems[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.elems
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elems.iter().position(|e| e == label)
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A total function between finite sets, stored by element index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinFunction {
    dom: FinSet,
    cod: FinSet,
    map: Arc<[usize]>,
}

impl FinFunction {
    pub fn new(dom: FinSet, cod: FinSet, map: Vec<usize>) -> Result<Self, FinSetError> {
        if map.len() != dom.len() {
            return Err(FinSetError::WrongArity {
                expected: dom.len(),
                got: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&j| j >= cod.len()) {
            return Err(FinSetError::OutOfRange {
                index: bad,
                size: cod.len(),
            });
        }
        Ok(Self {
            dom,
            cod,
            map: map.into(),
        })
    }

    pub(crate) fn new_unchecked(dom: FinSet, cod: FinSet, map: Vec<usize>) -> Self {
        debug_assert_eq!(map.len(), dom.len());
        debug_assert!(map.iter().all(|&j| j < cod.len()));
        Self {
            dom,
            cod,
            map: map.into(),
        }
    }

    /// Build a function from `(source label, target label)` pairs; every
    /// domain element must appear exactly once.
    pub fn from_labels<'a, I>(dom: FinSet, cod: FinSet, pairs: I) -> Result<Self, FinSetError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut map = vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            let i = dom
                .index_of(x)
                .ok_or_else(|| FinSetError::UnknownLabel(x.to_owned()))?;
            let j = cod
                .index_of(y)
                .ok_or_else(|| FinSetError::UnknownLabel(y.to_owned()))?;
            if map[i] != usize::MAX {
                return Err(FinSetError::MappedTwice(x.to_owned()));
            }
            map[i] = j;
        }
        if let Some(i) = map.iter().position(|&j| j == usize::MAX) {
            return Err(FinSetError::Unmapped(dom.label(i).to_owned()));
        }
        Ok(Self::new_unchecked(dom, cod, map))
    }

    pub fn identity(set: &FinSet) -> Self {
        Self::new_unchecked(set.clone(), set.clone(), (0..set.len()).collect())
    }

    /// The unique map into the one-point set.
    pub fn to_point(set: &FinSet) -> Self {
        Self::new_unchecked(set.clone(), FinSet::point(), vec![0; set.len()])
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn indices(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn apply_label(&self, x: &str) -> Option<&str> {
        self.dom.index_of(x).map(|i| self.cod.label(self.map[i]))
    }

    /// `self ∘ f`: first `f`, then `self`.
    pub fn after(&self, f: &FinFunction) -> Result<FinFunction, FinSetError> {
        if f.cod != self.dom {
            return Err(FinSetError::NotComposable(f.cod.clone(), self.dom.clone()));
        }
        Ok(Self::new_unchecked(
            f.dom.clone(),
            self.cod.clone(),
            f.map.iter().map(|&j| self.map[j]).collect(),
        ))
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        self.map.iter().all(|&j| !std::mem::replace(&mut hit[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for &j in self.map.iter() {
            hit[j] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<FinFunction> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.cod.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Some(Self::new_unchecked(self.cod.clone(), self.dom.clone(), inv))
    }

    /// Indices of the domain lying over codomain index `j`, in order.
    pub fn fiber(&self, j: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&i| self.map[i] == j).collect()
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.cod.len()];
        for &j in self.map.iter() {
            sizes[j] += 1;
        }
        sizes
    }

    pub fn image(&self) -> Vec<usize> {
        let mut hit = vec![false; self.cod.len()];
        for &j in self.map.iter() {
            hit[j] = true;
        }
        (0..hit.len()).filter(|&j| hit[j]).collect()
    }
}

impl fmt::Debug for FinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, &j) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", self.dom.label(i), self.cod.label(j))?;
        }
        write!(f, "] : {} -> {}", self.dom, self.cod)
    }
}

/// Every function `dom -> cod`, in lexicographic order of the index vector
/// (first element most significant).
pub fn all_functions(dom: &FinSet, cod: &FinSet) -> Vec<FinFunction> {
    let choices: Vec<Vec<usize>> = vec![(0..cod.len()).collect(); dom.len()];
    odometer(&choices)
        .into_iter()
        .map(|m| FinFunction::new_unchecked(dom.clone(), cod.clone(), m))
        .collect()
}

/// Cartesian product of per-position choice lists, lexicographic.
pub(crate) fn odometer(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    if choices.iter().any(|c| c.is_empty()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        out.push(idx.iter().zip(choices).map(|(&k, c)| c[k]).collect());
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// A chosen pullback `apex = {(x,y) : left(x) = right(y)}` with its two
/// projections. Elements are ordered lexicographically by `(x, y)` index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pullback {
    pub apex: FinSet,
    pub pr1: FinFunction,
    pub pr2: FinFunction,
    pub left: FinFunction,
    pub right: FinFunction,
}

pub fn pullback(f: &FinFunction, g: &FinFunction) -> Result<Pullback, FinSetError> {
    if f.cod != g.cod {
        return Err(FinSetError::CodomainMismatch(f.cod.clone(), g.cod.clone()));
    }
    let mut labels = Vec::new();
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    for i in 0..f.dom.len() {
        for j in 0..g.dom.len() {
            if f.map[i] == g.map[j] {
                labels.push(pair_label(f.dom.label(i), g.dom.label(j)));
                p1.push(i);
                p2.push(j);
            }
        }
    }
    let apex = FinSet::from_unique(labels);
    Ok(Pullback {
        pr1: FinFunction::new_unchecked(apex.clone(), f.dom.clone(), p1),
        pr2: FinFunction::new_unchecked(apex.clone(), g.dom.clone(), p2),
        apex,
        left: f.clone(),
        right: g.clone(),
    })
}

impl Pullback {
    /// The unique `u` with `pr1 ∘ u = q1` and `pr2 ∘ u = q2`.
    pub fn mediate(&self, q1: &FinFunction, q2: &FinFunction) -> Result<FinFunction, FinSetError> {
        if q1.dom != q2.dom {
            return Err(FinSetError::ConeDomainMismatch);
        }
        if q1.cod != self.left.dom || q2.cod != self.right.dom {
            return Err(FinSetError::NotComposable(q1.cod.clone(), self.left.dom.clone()));
        }
        // apex elements with first coordinate i start at offset[i]; within that
        // block they are ordered by the rank of j in its fiber of `right`
        let mut fiber_count = vec![0usize; self.right.cod.len()];
        let mut rank = vec![0usize; self.right.dom.len()];
        for (j, &z) in self.right.map.iter().enumerate() {
            rank[j] = fiber_count[z];
            fiber_count[z] += 1;
        }
        let mut offset = vec![0usize; self.left.dom.len()];
        let mut acc = 0;
        for (i, &z) in self.left.map.iter().enumerate() {
            offset[i] = acc;
            acc += fiber_count[z];
        }
        let mut map = Vec::with_capacity(q1.dom.len());
        for w in 0..q1.dom.len() {
            let (i, j) = (q1.map[w], q2.map[w]);
            if self.left.map[i] != self.right.map[j] {
                return Err(FinSetError::NotCommuting);
            }
            map.push(offset[i] + rank[j]);
        }
        Ok(FinFunction::new_unchecked(q1.dom.clone(), self.apex.clone(), map))
    }
}

/// Free-standing form of [`Pullback::mediate`].
pub fn mediating_map(
    pb: &Pullback,
    q1: &FinFunction,
    q2: &FinFunction,
) -> Result<FinFunction, FinSetError> {
    pb.mediate(q1, q2)
}

/// Quotient of `set` by the equivalence relation generated by `pairs`
/// (index pairs). Classes are labelled by their smallest member label and
/// listed in label order.
pub fn quotient(set: &FinSet, pairs: &[(usize, usize)]) -> (FinSet, FinFunction) {
    let n = set.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut class_label: BTreeMap<usize, &str> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let l = set.label(i);
        class_label
            .entry(r)
            .and_modify(|cur| {
                if l < *cur {
                    *cur = l;
                }
            })
            .or_insert(l);
    }
    let mut labels: Vec<&str> = class_label.values().copied().collect();
    labels.sort_unstable();
    let q = FinSet::from_unique(labels.iter().map(|s| (*s).to_owned()).collect());
    let map = (0..n)
        .map(|i| {
            let r = find(&mut parent, i);
            let l = class_label[&r];
            labels.binary_search(&l).expect("class label present")
        })
        .collect();
    let proj = FinFunction::new_unchecked(set.clone(), q.clone(), map);
    (q, proj)
}

/// A cartesian product with its projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    pub apex: FinSet,
    pub pr1: FinFunction,
    pub pr2: FinFunction,
}

pub fn product(x: &FinSet, y: &FinSet) -> Product {
    let pb = pullback(&FinFunction::to_point(x), &FinFunction::to_point(y))
        .expect("both legs land in the point");
    Product {
        apex: pb.apex,
        pr1: pb.pr1,
        pr2: pb.pr2,
    }
}

/// A binary coproduct; elements are labelled `(0,x)` and `(1,y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coproduct {
    pub apex: FinSet,
    pub in1: FinFunction,
    pub in2: FinFunction,
}

pub fn coproduct(x: &FinSet, y: &FinSet) -> Coproduct {
    let labels = x
        .labels()
        .iter()
        .map(|l| pair_label("0", l))
        .chain(y.labels().iter().map(|l| pair_label("1", l)))
        .collect();
    let apex = FinSet::from_unique(labels);
    Coproduct {
        in1: FinFunction::new_unchecked(x.clone(), apex.clone(), (0..x.len()).collect()),
        in2: FinFunction::new_unchecked(y.clone(), apex.clone(), (x.len()..x.len() + y.len()).collect()),
        apex,
    }
}

/// The subset where `f` and `g` agree, with its inclusion. Labels are kept.
pub fn equalizer(f: &FinFunction, g: &FinFunction) -> Result<(FinSet, FinFunction), FinSetError> {
    if f.dom != g.dom {
        return Err(FinSetError::ConeDomainMismatch);
    }
    if f.cod != g.cod {
        return Err(FinSetError::CodomainMismatch(f.cod.clone(), g.cod.clone()));
    }
    let keep: Vec<usize> = (0..f.dom.len()).filter(|&i| f.map[i] == g.map[i]).collect();
    let e = FinSet::from_unique(keep.iter().map(|&i| f.dom.label(i).to_owned()).collect());
    let inc = FinFunction::new_unchecked(e.clone(), f.dom.clone(), keep);
    Ok((e, inc))
}

/// The category of finite sets. Objects are enumerated one per cardinality
/// as `{0, ..., n-1}`; any labelled set is an object.
#[derive(Debug, Clone, Copy, Default)]
pub struct FinSetCat;

impl Category for FinSetCat {
    type Obj = FinSet;
    type Mor = FinFunction;

    fn name(&self) -> String {
        "FinSet".to_owned()
    }

    fn objects(&self, bound: usize) -> Enumerated<FinSet> {
        Enumerated::truncated((0..=bound).map(FinSet::range).collect())
    }

    fn hom(&self, x: &FinSet, y: &FinSet) -> Vec<FinFunction> {
        all_functions(x, y)
    }

    fn dom(&self, f: &FinFunction) -> FinSet {
        f.dom.clone()
    }

    fn cod(&self, f: &FinFunction) -> FinSet {
        f.cod.clone()
    }

    fn identity(&self, x: &FinSet) -> FinFunction {
        FinFunction::identity(x)
    }

    fn try_compose(&self, g: &FinFunction, f: &FinFunction) -> Option<FinFunction> {
        g.after(f).ok()
    }

    fn inverse(&self, f: &FinFunction) -> Option<FinFunction> {
        f.inverse()
    }

    fn isomorphisms(&self, x: &FinSet, y: &FinSet) -> Vec<FinFunction> {
        if x.len() != y.len() {
            return Vec::new();
        }
        permutations(x.len())
            .into_iter()
            .map(|m| FinFunction::new_unchecked(x.clone(), y.clone(), m))
            .collect()
    }

    fn find_isomorphism(&self, x: &FinSet, y: &FinSet) -> Option<(FinFunction, FinFunction)> {
        (x.len() == y.len()).then(|| {
            let f = FinFunction::new_unchecked(x.clone(), y.clone(), (0..x.len()).collect());
            let g = FinFunction::new_unchecked(y.clone(), x.clone(), (0..x.len()).collect());
            (f, g)
        })
    }
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                go(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

impl PullbackCategory for FinSetCat {
    fn pullback(
        &self,
        f: &FinFunction,
        g: &FinFunction,
    ) -> Result<Cone<FinSet, FinFunction>, LimitError> {
        let pb = pullback(f, g)?;
        Ok(Cone {
            apex: pb.apex,
            pr1: pb.pr1,
            pr2: pb.pr2,
            left: pb.left,
            right: pb.right,
        })
    }

    fn mediate(
        &self,
        cone: &Cone<FinSet, FinFunction>,
        q1: &FinFunction,
        q2: &FinFunction,
    ) -> Result<FinFunction, LimitError> {
        let pb = Pullback {
            apex: cone.apex.clone(),
            pr1: cone.pr1.clone(),
            pr2: cone.pr2.clone(),
            left: cone.left.clone(),
            right: cone.right.clone(),
        };
        pb.mediate(q1, q2).map_err(|e| match e {
            FinSetError::NotCommuting => LimitError::NotCommuting,
            other => LimitError::from(other),
        })
    }

    fn slice_objects(&self, base: &FinSet, bound: usize) -> Enumerated<FinFunction> {
        Enumerated::truncated(
            fiber_vectors(base.len(), bound)
                .into_iter()
                .map(|sizes| canonical_over(base, &sizes))
                .collect(),
        )
        .complete_if(base.is_empty())
    }

    fn slice_hom(&self, x: &FinFunction, y: &FinFunction) -> Vec<FinFunction> {
        let choices: Vec<Vec<usize>> = x.map.iter().map(|&b| y.fiber(b)).collect();
        odometer(&choices)
            .into_iter()
            .map(|m| FinFunction::new_unchecked(x.dom.clone(), y.dom.clone(), m))
            .collect()
    }

    fn slice_isomorphisms(&self, x: &FinFunction, y: &FinFunction) -> Vec<FinFunction> {
        if x.fiber_sizes() != y.fiber_sizes() {
            return Vec::new();
        }
        // per fiber, every bijection onto the matching fiber of y
        let mut per_fiber: Vec<(Vec<usize>, Vec<Vec<usize>>)> = Vec::new();
        for b in 0..x.cod.len() {
            let xs = x.fiber(b);
            let ys = y.fiber(b);
            let perms = permutations(xs.len())
                .into_iter()
                .map(|p| p.into_iter().map(|k| ys[k]).collect())
                .collect();
            per_fiber.push((xs, perms));
        }
        let choice_counts: Vec<Vec<usize>> =
            per_fiber.iter().map(|(_, ps)| (0..ps.len()).collect()).collect();
        let mut out: Vec<FinFunction> = odometer(&choice_counts)
            .into_iter()
            .map(|pick| {
                let mut map = vec![0; x.dom.len()];
                for ((xs, perms), k) in per_fiber.iter().zip(pick) {
                    for (&i, &j) in xs.iter().zip(&perms[k]) {
                        map[i] = j;
                    }
                }
                FinFunction::new_unchecked(x.dom.clone(), y.dom.clone(), map)
            })
            .collect();
        out.sort_by(|a, b| a.map.cmp(&b.map));
        out
    }

    fn slice_find_iso(&self, x: &FinFunction, y: &FinFunction) -> Option<FinFunction> {
        if x.fiber_sizes() != y.fiber_sizes() {
            return None;
        }
        let mut next = vec![0usize; x.cod.len()];
        let fibers: Vec<Vec<usize>> = (0..y.cod.len()).map(|b| y.fiber(b)).collect();
        let map = x
            .map
            .iter()
            .map(|&b| {
                let j = fibers[b][next[b]];
                next[b] += 1;
                j
            })
            .collect();
        Some(FinFunction::new_unchecked(x.dom.clone(), y.dom.clone(), map))
    }
}

/// All vectors of `len` non-negative fiber sizes with total at most `bound`,
/// ordered by total, then lexicographically.
pub fn fiber_vectors(len: usize, bound: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for k in (0..=total).rev() {
            prefix.push(k);
            go(len, total - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for total in 0..=bound {
        if len == 0 && total > 0 {
            break;
        }
        go(len, total, &mut Vec::new(), &mut out);
    }
    out
}

/// The canonical object over `base` with the given fiber sizes; elements are
/// `0..n` listed fiber by fiber.
pub fn canonical_over(base: &FinSet, sizes: &[usize]) -> FinFunction {
    let map: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &k)| std::iter::repeat_n(b, k))
        .collect();
    FinFunction::new_unchecked(FinSet::range(map.len()), base.clone(), map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ls: &[&str]) -> FinSet {
        FinSet::new(ls.iter().copied()).unwrap()
    }

    fn fun(dom: &FinSet, cod: &FinSet, pairs: &[(&str, &str)]) -> FinFunction {
        FinFunction::from_labels(dom.clone(), cod.clone(), pairs.iter().copied()).unwrap()
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert_eq!(
            FinSet::new(["a", "a"]),
            Err(FinSetError::DuplicateLabel("a".into()))
        );
        assert!(FinSet::new(Vec::<String>::new()).unwrap().is_empty());
    }

    #[test]
    fn pullback_over_point_is_product() {
        let x = set(&["a", "b"]);
        let f = FinFunction::to_point(&x);
        let pb = pullback(&f, &f).unwrap();
        assert_eq!(pb.apex.labels(), ["(a,a)", "(a,b)", "(b,a)", "(b,b)"]);
    }

    #[test]
    fn pullback_along_identity_is_domain() {
        let z = set(&["x", "y"]);
        let w = set(&["u", "v", "t"]);
        let g = fun(&w, &z, &[("u", "x"), ("v", "y"), ("t", "y")]);
        let pb = pullback(&FinFunction::identity(&z), &g).unwrap();
        assert!(pb.pr2.is_bijective());
    }

    #[test]
    fn pullback_of_partial_match() {
        let z = set(&["x", "y"]);
        let f = fun(&set(&["a", "b"]), &z, &[("a", "x"), ("b", "y")]);
        let g = fun(&set(&["c"]), &z, &[("c", "x")]);
        let pb = pullback(&f, &g).unwrap();
        assert_eq!(pb.apex.labels(), ["(a,c)"]);
    }

    #[test]
    fn pullback_rejects_codomain_mismatch() {
        let f = FinFunction::identity(&set(&["a"]));
        let g = FinFunction::identity(&set(&["b"]));
        assert!(matches!(pullback(&f, &g), Err(FinSetError::CodomainMismatch(..))));
    }

    #[test]
    fn mediating_map_cases() {
        let x = set(&["a", "b"]);
        let f = FinFunction::to_point(&x);
        let pb = pullback(&f, &f).unwrap();
        // the cone (pr1, pr2) of the pullback itself
        let u = pb.mediate(&pb.pr1, &pb.pr2).unwrap();
        assert_eq!(u, FinFunction::identity(&pb.apex));
        // diagonal
        let id = FinFunction::identity(&x);
        let diag = pb.mediate(&id, &id).unwrap();
        assert_eq!(diag.apply_label("a"), Some("(a,a)"));
        assert_eq!(diag.apply_label("b"), Some("(b,b)"));
        // one-point cone: u(w) = (q1 w, q2 w)
        let one = set(&["w"]);
        let q1 = fun(&one, &x, &[("w", "b")]);
        let q2 = fun(&one, &x, &[("w", "a")]);
        assert_eq!(pb.mediate(&q1, &q2).unwrap().apply_label("w"), Some("(b,a)"));
    }

    #[test]
    fn mediating_map_rejects_non_commuting_cone() {
        let z = set(&["x", "y"]);
        let f = fun(&set(&["a", "b"]), &z, &[("a", "x"), ("b", "y")]);
        let pb = pullback(&f, &f).unwrap();
        let one = set(&["w"]);
        let q1 = fun(&one, f.dom(), &[("w", "a")]);
        let q2 = fun(&one, f.dom(), &[("w", "b")]);
        assert_eq!(pb.mediate(&q1, &q2), Err(FinSetError::NotCommuting));
    }

    #[test]
    fn quotient_cases() {
        let x = set(&["a", "b"]);
        let (q, proj) = quotient(&x, &[]);
        assert_eq!(q, x);
        assert!(proj.is_bijective());

        let (q, proj) = quotient(&x, &[(0, 1)]);
        assert_eq!(q.labels(), ["a"]);
        assert_eq!(proj.indices(), [0, 0]);

        let x = set(&["c", "b", "a"]);
        let (q, _) = quotient(&x, &[(0, 1), (1, 2)]);
        assert_eq!(q.labels(), ["a"]);
    }

    #[test]
    fn product_equalizer_coproduct() {
        let one = set(&["a"]);
        let x = set(&["p", "q"]);
        let pr = product(&one, &x);
        assert_eq!(pr.apex.len(), 2);
        assert!(pr.pr2.is_bijective());

        let f = fun(&x, &set(&["u", "v"]), &[("p", "u"), ("q", "v")]);
        let (e, inc) = equalizer(&f, &f).unwrap();
        assert_eq!(e, x);
        assert!(inc.is_bijective());
        let g = fun(&x, &set(&["u", "v"]), &[("p", "u"), ("q", "u")]);
        let (e, _) = equalizer(&f, &g).unwrap();
        assert_eq!(e.labels(), ["p"]);

        let c = coproduct(&one, &x);
        assert_eq!(c.apex.labels(), ["(0,a)", "(1,p)", "(1,q)"]);
    }

    #[test]
    fn pair_labels_nest_without_escapes() {
        let l = pair_label(&pair_label("x", "e"), &pair_label("e0", "e1"));
        assert_eq!(l, "((x,e),(e0,e1))");
        assert_eq!(
            parse_pair_label(&l),
            Some(("(x,e)".to_owned(), "(e0,e1)".to_owned()))
        );
        assert_eq!(pair_label("a,b", ")"), "(a\\,b,\\))");
    }

    #[test]
    fn slice_enumeration_over_two_points_bound_one() {
        let b = set(&["x", "y"]);
        let objs = FinSetCat.slice_objects(&b, 1).items;
        assert_eq!(objs.len(), 3);
        assert_eq!(objs[0].dom().len(), 0);
        assert_eq!(objs[1].indices(), [0]);
        assert_eq!(objs[2].indices(), [1]);
    }

    #[test]
    fn find_isomorphism_between_two_element_sets() {
        let a = set(&["a", "b"]);
        let b = set(&["c", "d"]);
        let (f, g) = FinSetCat.find_isomorphism(&a, &b).unwrap();
        // canonical choice: the first of the two bijections
        assert_eq!(f.apply_label("a"), Some("c"));
        assert_eq!(g.after(&f).unwrap(), FinFunction::identity(&a));
        assert_eq!(FinSetCat.isomorphisms(&a, &b).len(), 2);
        assert!(FinSetCat.find_isomorphism(&set(&["a"]), &a).is_none());
    }
}
