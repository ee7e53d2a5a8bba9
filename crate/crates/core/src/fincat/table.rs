//! Table-backed finite categories and their validator.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{Category, Enumerated};
use crate::error::TableError;

/// An explicitly tabulated finite category. Objects and morphisms are opaque
/// string identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<(String, String, String)>,
    identity: BTreeMap<String, String>,
    compose: BTreeMap<(String, String), String>,
    by_id: HashMap<String, usize>,
    homs: HashMap<(String, String), Vec<String>>,
}

/// A single failed law of a [`FinCategory`] table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TableViolation {
    DuplicateObject(String),
    DuplicateMorphism(String),
    UnknownEndpoint { morphism: String, object: String },
    MissingIdentity(String),
    IdentityNotEndo { object: String, morphism: String },
    UnknownInTable(String),
    NonComposablePair { g: String, f: String },
    MissingComposite { g: String, f: String },
    CompositeWrongType { g: String, f: String, result: String },
    LeftUnit { f: String },
    RightUnit { f: String },
    Associativity { h: String, g: String, f: String },
}

impl fmt::Display for TableViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TableViolation::*;
        match self {
            DuplicateObject(x) => write!(out, "duplicate object `{x}`"),
            DuplicateMorphism(m) => write!(out, "duplicate morphism `{m}`"),
            UnknownEndpoint { morphism, object } => {
                write!(out, "morphism `{morphism}` has undeclared endpoint `{object}`")
            }
            MissingIdentity(x) => write!(out, "object `{x}` has no identity"),
            IdentityNotEndo { object, morphism } => {
                write!(out, "identity `{morphism}` of `{object}` is not an endomorphism of it")
            }
            UnknownInTable(m) => write!(out, "table mentions undeclared morphism `{m}`"),
            NonComposablePair { g, f } => {
                write!(out, "compose defined on non-composable pair ({g}, {f})")
            }
            MissingComposite { g, f } => write!(out, "composite {g}∘{f} is missing"),
            CompositeWrongType { g, f, result } => {
                write!(out, "composite {g}∘{f} = `{result}` has the wrong domain or codomain")
            }
            LeftUnit { f } => write!(out, "left unit law fails at `{f}`"),
            RightUnit { f } => write!(out, "right unit law fails at `{f}`"),
            Associativity { h, g, f } => {
                write!(out, "associativity fails at ({h}, {g}, {f})")
            }
        }
    }
}

impl FinCategory {
    /// Build from raw tables. Only referential integrity needed for lookups
    /// is enforced here; the category laws are checked by
    /// [`validate_category`].
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        identity: BTreeMap<String, String>,
        compose: BTreeMap<(String, String), String>,
    ) -> Result<Self, TableError> {
        let mut by_id = HashMap::new();
        let mut homs: HashMap<(String, String), Vec<String>> = HashMap::new();
        for (k, (m, d, c)) in morphisms.iter().enumerate() {
            if by_id.insert(m.clone(), k).is_some() {
                return Err(TableError::DuplicateMorphism(m.clone()));
            }
            homs.entry((d.clone(), c.clone())).or_default().push(m.clone());
        }
        for x in &objects {
            if !identity.contains_key(x) {
                return Err(TableError::MissingIdentity(x.clone()));
            }
        }
        Ok(Self {
            name: name.into(),
            objects,
            morphisms,
            identity,
            compose,
            by_id,
            homs,
        })
    }

    /// The poset generated by the given covering relations (reflexive
    /// transitive closure). Morphism `x≤y` is named `x<y`, identities `id_x`.
    pub fn poset<const N: usize>(
        objects: [&str; N],
        covers: &[(&str, &str)],
    ) -> Result<Self, TableError> {
        let n = objects.len();
        let idx = |s: &str| objects.iter().position(|o| *o == s);
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in covers {
            let (i, j) = (
                idx(a).ok_or_else(|| TableError::UnknownObject(a.to_string()))?,
                idx(b).ok_or_else(|| TableError::UnknownObject(b.to_string()))?,
            );
            le[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if le[i][k] && le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
        let name_of = |i: usize, j: usize| {
            if i == j {
                format!("id_{}", objects[i])
            } else {
                format!("{}<{}", objects[i], objects[j])
            }
        };
        let mut morphisms = Vec::new();
        let mut identity = BTreeMap::new();
        let mut compose = BTreeMap::new();
        for i in 0..n {
            identity.insert(objects[i].to_string(), name_of(i, i));
            for j in 0..n {
                if le[i][j] {
                    morphisms.push((name_of(i, j), objects[i].to_string(), objects[j].to_string()));
                    for k in 0..n {
                        if le[j][k] {
                            compose.insert((name_of(j, k), name_of(i, j)), name_of(i, k));
                        }
                    }
                }
            }
        }
        let label = format!("Poset[{}]", objects.join(","));
        Self::new(
            label,
            objects.iter().map(|s| s.to_string()).collect(),
            morphisms,
            identity,
            compose,
        )
    }

    /// The category with one object and only its identity.
    pub fn terminal() -> Self {
        Self::poset(["*"], &[]).expect("well-formed")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn object_ids(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_table(&self) -> &[(String, String, String)] {
        &self.morphisms
    }

    pub fn identity_table(&self) -> &BTreeMap<String, String> {
        &self.identity
    }

    pub fn compose_table(&self) -> &BTreeMap<(String, String), String> {
        &self.compose
    }

    pub fn has_morphism(&self, m: &str) -> bool {
        self.by_id.contains_key(m)
    }

    fn endpoints(&self, m: &str) -> Option<(&str, &str)> {
        self.by_id
            .get(m)
            .map(|&k| (self.morphisms[k].1.as_str(), self.morphisms[k].2.as_str()))
    }
}

impl Category for FinCategory {
    type Obj = String;
    type Mor = String;

    fn name(&self) -> String {
        self.name.clone()
    }

    fn objects(&self, _bound: usize) -> Enumerated<String> {
        Enumerated::complete(self.objects.clone())
    }

    fn hom(&self, x: &String, y: &String) -> Vec<String> {
        self.homs
            .get(&(x.clone(), y.clone()))
            .cloned()
            .unwrap_or_default()
    }

    fn dom(&self, f: &String) -> String {
        self.endpoints(f)
            .map(|(d, _)| d.to_owned())
            .unwrap_or_else(|| panic!("{}: unknown morphism `{f}`", self.name))
    }

    fn cod(&self, f: &String) -> String {
        self.endpoints(f)
            .map(|(_, c)| c.to_owned())
            .unwrap_or_else(|| panic!("{}: unknown morphism `{f}`", self.name))
    }

    fn identity(&self, x: &String) -> String {
        self.identity
            .get(x)
            .cloned()
            .unwrap_or_else(|| panic!("{}: unknown object `{x}`", self.name))
    }

    fn try_compose(&self, g: &String, f: &String) -> Option<String> {
        let (_, cf) = self.endpoints(f)?;
        let (dg, _) = self.endpoints(g)?;
        if cf != dg {
            return None;
        }
        self.compose.get(&(g.clone(), f.clone())).cloned()
    }

    fn contains(&self, x: &String) -> bool {
        self.identity.contains_key(x)
    }
}

/// Check every category law of a table; violations are data, never errors.
/// The report is sorted, so it is deterministic.
pub fn validate_category(cat: &FinCategory) -> Vec<TableViolation> {
    use TableViolation::*;
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for x in &cat.objects {
        if !seen.insert(x) {
            out.push(DuplicateObject(x.clone()));
        }
    }
    let known = |x: &str| cat.objects.iter().any(|o| o == x);
    for (m, d, c) in &cat.morphisms {
        for end in [d, c] {
            if !known(end) {
                out.push(UnknownEndpoint {
                    morphism: m.clone(),
                    object: end.clone(),
                });
            }
        }
    }
    for x in &cat.objects {
        match cat.identity.get(x) {
            None => out.push(MissingIdentity(x.clone())),
            Some(i) => match cat.endpoints(i) {
                Some((d, c)) if d == x && c == x => {}
                _ => out.push(IdentityNotEndo {
                    object: x.clone(),
                    morphism: i.clone(),
                }),
            },
        }
    }
    for ((g, f), r) in &cat.compose {
        let mut bad = false;
        for m in [g, f, r] {
            if !cat.has_morphism(m) {
                out.push(UnknownInTable(m.clone()));
                bad = true;
            }
        }
        if bad {
            continue;
        }
        let (df, cf) = cat.endpoints(f).expect("checked");
        let (dg, cg) = cat.endpoints(g).expect("checked");
        if cf != dg {
            out.push(NonComposablePair {
                g: g.clone(),
                f: f.clone(),
            });
            continue;
        }
        let (dr, cr) = cat.endpoints(r).expect("checked");
        if dr != df || cr != cg {
            out.push(CompositeWrongType {
                g: g.clone(),
                f: f.clone(),
                result: r.clone(),
            });
        }
    }
    let comp = |g: &String, f: &String| cat.compose.get(&(g.clone(), f.clone()));
    for (f, df, cf) in &cat.morphisms {
        for (g, dg, _) in &cat.morphisms {
            if cf == dg && comp(g, f).is_none() {
                out.push(MissingComposite {
                    g: g.clone(),
                    f: f.clone(),
                });
            }
        }
        if let Some(idc) = cat.identity.get(cf) {
            if comp(idc, f) != Some(f) {
                out.push(LeftUnit { f: f.clone() });
            }
        }
        if let Some(idd) = cat.identity.get(df) {
            if comp(f, idd) != Some(f) {
                out.push(RightUnit { f: f.clone() });
            }
        }
    }
    for (f, _, cf) in &cat.morphisms {
        for (g, dg, cg) in &cat.morphisms {
            if cf != dg {
                continue;
            }
            for (h, dh, _) in &cat.morphisms {
                if cg != dh {
                    continue;
                }
                let lhs = comp(g, f).and_then(|gf| comp(h, gf));
                let rhs = comp(h, g).and_then(|hg| comp(hg, f));
                if let (Some(l), Some(r)) = (lhs, rhs) {
                    if l != r {
                        out.push(Associativity {
                            h: h.clone(),
                            g: g.clone(),
                            f: f.clone(),
                        });
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_category_is_valid() {
        assert!(validate_category(&FinCategory::terminal()).is_empty());
    }

    #[test]
    fn chain_of_three_is_valid() {
        let c = FinCategory::poset(["0", "1", "2"], &[("0", "1"), ("1", "2")]).unwrap();
        assert!(validate_category(&c).is_empty());
        assert_eq!(c.morphism_table().len(), 6);
    }

    #[test]
    fn compose_on_non_composable_pair_is_reported() {
        // f : a → b with compose(f, f) = g although cod f ≠ dom f
        let s = |x: &str| x.to_string();
        let objects = vec![s("a"), s("b")];
        let morphisms = vec![
            (s("ia"), s("a"), s("a")),
            (s("ib"), s("b"), s("b")),
            (s("f"), s("a"), s("b")),
            (s("g"), s("a"), s("b")),
        ];
        let identity = [(s("a"), s("ia")), (s("b"), s("ib"))].into_iter().collect();
        let mut compose: BTreeMap<(String, String), String> = BTreeMap::new();
        for (m, d, c) in &morphisms {
            compose.insert((format!("i{c}"), m.clone()), m.clone());
            compose.insert((m.clone(), format!("i{d}")), m.clone());
        }
        compose.insert((s("f"), s("f")), s("g"));
        let cat = FinCategory::new("bad", objects, morphisms, identity, compose).unwrap();
        let report = validate_category(&cat);
        assert_eq!(
            report,
            vec![TableViolation::NonComposablePair {
                g: s("f"),
                f: s("f")
            }]
        );
        assert_eq!(
            report[0].to_string(),
            "compose defined on non-composable pair (f, f)"
        );
    }
}
