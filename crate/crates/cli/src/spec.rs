//! Spec files: TOML documents declaring finite sets, functions, table
//! categories, functors and transformations, plus an optional task block.
//! The grammar is documented in `docs/spec-format.md`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use descent_kit::fincat::FinCategory;
use descent_kit::{DynCategory, FinFunction, FinSet, Functor, NatTrans};
use serde::{Deserialize, Serialize};
use toml::Spanned;

/// A parse or validation error located in the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for SpecError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    set: Vec<RawSet>,
    #[serde(default)]
    function: Vec<RawFunction>,
    #[serde(default)]
    category: Vec<RawCategory>,
    #[serde(default)]
    functor: Vec<RawFunctor>,
    #[serde(default)]
    transformation: Vec<RawTransformation>,
    task: Option<RawTask>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    name: Spanned<String>,
    elements: Option<Spanned<Vec<String>>>,
    size: Option<Spanned<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunction {
    name: Spanned<String>,
    dom: Spanned<String>,
    cod: Spanned<String>,
    map: Spanned<BTreeMap<String, String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCategory {
    name: Spanned<String>,
    objects: Spanned<Vec<String>>,
    morphisms: Spanned<Vec<[String; 3]>>,
    identity: Spanned<BTreeMap<String, String>>,
    #[serde(default)]
    compose: Vec<Spanned<[String; 3]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunctor {
    name: Spanned<String>,
    source: Spanned<String>,
    target: Spanned<String>,
    objects: Spanned<BTreeMap<String, String>>,
    morphisms: Spanned<BTreeMap<String, String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransformation {
    name: Spanned<String>,
    source: Spanned<String>,
    target: Spanned<String>,
    components: Spanned<BTreeMap<String, String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTask {
    map: Option<Spanned<String>>,
    bound: Option<usize>,
}

pub type TableFunctor = Functor<String, String, String, String>;
pub type TableTransformation = NatTrans<String, String, String, String>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Task {
    pub map: Option<String>,
    pub bound: Option<usize>,
}

/// A parsed, cross-referenced spec. Every list keeps declaration order.
pub struct Spec {
    pub sets: Vec<(String, FinSet)>,
    pub functions: Vec<(String, FinFunction)>,
    pub categories: Vec<(String, Arc<FinCategory>)>,
    pub functors: Vec<(String, TableFunctor)>,
    pub transformations: Vec<(String, TableTransformation)>,
    pub task: Option<Task>,
}

impl std::fmt::Debug for Spec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = |v: Vec<&String>| v.into_iter().cloned().collect::<Vec<_>>();
        f.debug_struct("Spec")
            .field("sets", &names(self.sets.iter().map(|x| &x.0).collect()))
            .field("functions", &names(self.functions.iter().map(|x| &x.0).collect()))
            .field("categories", &names(self.categories.iter().map(|x| &x.0).collect()))
            .field("functors", &names(self.functors.iter().map(|x| &x.0).collect()))
            .field("transformations", &names(self.transformations.iter().map(|x| &x.0).collect()))
            .field("task", &self.task)
            .finish()
    }
}

impl Spec {
    pub fn function(&self, name: &str) -> Option<&FinFunction> {
        self.functions.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    /// The function named by the task block.
    pub fn task_map(&self) -> Result<(&str, &FinFunction), String> {
        let name = self
            .task
            .as_ref()
            .and_then(|t| t.map.as_deref())
            .ok_or("the spec has no `[task]` block naming a `map`")?;
        let f = self.function(name).ok_or_else(|| format!("unknown function `{name}`"))?;
        Ok((name, f))
    }
}

/// Line of a byte offset, 1-based.
fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

struct Resolver<'a> {
    src: &'a str,
    /// name → start offset of its declaration, per namespace
    declared: BTreeMap<(&'static str, String), usize>,
}

impl<'a> Resolver<'a> {
    fn err(&self, span: Range<usize>, message: impl Into<String>) -> SpecError {
        SpecError {
            line: line_of(self.src, span.start),
            message: message.into(),
        }
    }

    fn declare(&mut self, ns: &'static str, name: &Spanned<String>) -> Result<(), SpecError> {
        let key = (ns, name.get_ref().clone());
        if self.declared.contains_key(&key) {
            return Err(self.err(name.span(), format!("{ns} `{}` declared twice", name.get_ref())));
        }
        self.declared.insert(key, name.span().start);
        Ok(())
    }

    /// A reference must name something declared earlier in the file.
    fn resolve(&self, ns: &'static str, name: &Spanned<String>) -> Result<(), SpecError> {
        match self.declared.get(&(ns, name.get_ref().clone())) {
            Some(&at) if at < name.span().start => Ok(()),
            Some(_) => Err(self.err(
                name.span(),
                format!("{ns} `{}` is used before its declaration", name.get_ref()),
            )),
            None => Err(self.err(name.span(), format!("unknown {ns} `{}`", name.get_ref()))),
        }
    }
}

pub fn parse(src: &str) -> Result<Spec, SpecError> {
    let raw: RawSpec = toml::from_str(src).map_err(|e| SpecError {
        line: e.span().map_or(1, |s| line_of(src, s.start)),
        message: e.message().trim().to_owned(),
    })?;
    let mut r = Resolver {
        src,
        declared: BTreeMap::new(),
    };

    let mut sets: Vec<(String, FinSet)> = Vec::new();
    for s in &raw.set {
        r.declare("set", &s.name)?;
        let set = match (&s.elements, &s.size) {
            (Some(els), None) => FinSet::new(els.get_ref().iter().map(String::as_str))
                .map_err(|e| r.err(els.span(), e.to_string()))?,
            (None, Some(n)) => FinSet::range(*n.get_ref()),
            _ => {
                return Err(r.err(
                    s.name.span(),
                    format!("set `{}` needs exactly one of `elements` or `size`", s.name.get_ref()),
                ))
            }
        };
        sets.push((s.name.get_ref().clone(), set));
    }
    let set = |name: &Spanned<String>| -> FinSet {
        sets.iter()
            .find(|(n, _)| n == name.get_ref())
            .map(|(_, s)| s.clone())
            .expect("resolved")
    };

    let mut functions = Vec::new();
    for f in &raw.function {
        r.declare("function", &f.name)?;
        r.resolve("set", &f.dom)?;
        r.resolve("set", &f.cod)?;
        let (dom, cod) = (set(&f.dom), set(&f.cod));
        let map = f.map.get_ref();
        if let Some(extra) = map.keys().find(|k| dom.index_of(k).is_none()) {
            return Err(r.err(
                f.map.span(),
                format!("`{extra}` is not an element of `{}`", f.dom.get_ref()),
            ));
        }
        let mut pairs = Vec::new();
        for x in dom.labels() {
            let y = map.get(x).ok_or_else(|| {
                r.err(f.map.span(), format!("function `{}` has no value at `{x}`", f.name.get_ref()))
            })?;
            pairs.push((x.as_str(), y.as_str()));
        }
        let fun = FinFunction::from_labels(dom.clone(), cod, pairs)
            .map_err(|e| r.err(f.map.span(), e.to_string()))?;
        functions.push((f.name.get_ref().clone(), fun));
    }

    let mut categories: Vec<(String, Arc<FinCategory>)> = Vec::new();
    for c in &raw.category {
        r.declare("category", &c.name)?;
        let mut compose = BTreeMap::new();
        for row in &c.compose {
            let [g, f, gf] = row.get_ref().clone();
            if compose.insert((g.clone(), f.clone()), gf).is_some() {
                return Err(r.err(row.span(), format!("composite {g}∘{f} given twice")));
            }
        }
        let morphisms = c
            .morphisms
            .get_ref()
            .iter()
            .map(|[m, d, t]| (m.clone(), d.clone(), t.clone()))
            .collect();
        let cat = FinCategory::new(
            c.name.get_ref().clone(),
            c.objects.get_ref().clone(),
            morphisms,
            c.identity.get_ref().clone(),
            compose,
        )
        .map_err(|e| r.err(c.name.span(), e.to_string()))?;
        categories.push((c.name.get_ref().clone(), Arc::new(cat)));
    }
    let category = |name: &Spanned<String>| -> Arc<FinCategory> {
        categories
            .iter()
            .find(|(n, _)| n == name.get_ref())
            .map(|(_, c)| c.clone())
            .expect("resolved")
    };

    let mut functors: Vec<(String, TableFunctor)> = Vec::new();
    for f in &raw.functor {
        r.declare("functor", &f.name)?;
        r.resolve("category", &f.source)?;
        r.resolve("category", &f.target)?;
        let (src, tgt) = (category(&f.source), category(&f.target));
        let total = |table: &Spanned<BTreeMap<String, String>>, keys: &[String], values: &dyn Fn(&str) -> bool, what: &str| {
            for k in keys {
                match table.get_ref().get(k) {
                    None => return Err(r.err(table.span(), format!("functor `{}` has no {what} image for `{k}`", f.name.get_ref()))),
                    Some(v) if !values(v) => {
                        return Err(r.err(table.span(), format!("`{v}` is not a {what} of `{}`", f.target.get_ref())))
                    }
                    Some(_) => {}
                }
            }
            if let Some(extra) = table.get_ref().keys().find(|k| !keys.contains(k)) {
                return Err(r.err(table.span(), format!("`{extra}` is not a {what} of `{}`", f.source.get_ref())));
            }
            Ok(())
        };
        let tobjs = tgt.object_ids().to_vec();
        let tmors: Vec<String> = tgt.morphism_table().iter().map(|(m, _, _)| m.clone()).collect();
        let smors: Vec<String> = src.morphism_table().iter().map(|(m, _, _)| m.clone()).collect();
        total(&f.objects, src.object_ids(), &|v| tobjs.iter().any(|o| o == v), "object")?;
        total(&f.morphisms, &smors, &|v| tmors.iter().any(|m| m == v), "morphism")?;
        let (om, mm) = (f.objects.get_ref().clone(), f.morphisms.get_ref().clone());
        let functor = Functor::new(
            f.name.get_ref().clone(),
            src as DynCategory<String, String>,
            tgt as DynCategory<String, String>,
            move |x: &String| om.get(x).cloned().unwrap_or_default(),
            move |m: &String| mm.get(m).cloned().unwrap_or_default(),
        );
        functors.push((f.name.get_ref().clone(), functor));
    }
    let functor = |name: &Spanned<String>| -> TableFunctor {
        functors
            .iter()
            .find(|(n, _)| n == name.get_ref())
            .map(|(_, f)| f.clone())
            .expect("resolved")
    };

    let mut transformations = Vec::new();
    for t in &raw.transformation {
        r.declare("transformation", &t.name)?;
        r.resolve("functor", &t.source)?;
        r.resolve("functor", &t.target)?;
        let (f, g) = (functor(&t.source), functor(&t.target));
        if f.source.name() != g.source.name() || f.target.name() != g.target.name() {
            return Err(r.err(t.target.span(), "source and target functors are not parallel"));
        }
        let comps = t.components.get_ref().clone();
        for x in f.source.objects(usize::MAX).items {
            if !comps.contains_key(&x) {
                return Err(r.err(
                    t.components.span(),
                    format!("transformation `{}` has no component at `{x}`", t.name.get_ref()),
                ));
            }
        }
        let tr = NatTrans::new(t.name.get_ref().clone(), f, g, move |x: &String| {
            comps.get(x).cloned().unwrap_or_default()
        });
        transformations.push((t.name.get_ref().clone(), tr));
    }

    let task = match &raw.task {
        Some(t) => {
            if let Some(m) = &t.map {
                r.resolve("function", m)?;
            }
            Some(Task {
                map: t.map.as_ref().map(|m| m.get_ref().clone()),
                bound: t.bound,
            })
        }
        None => None,
    };

    Ok(Spec {
        sets,
        functions,
        categories,
        functors,
        transformations,
        task,
    })
}

// ---------------------------------------------------------------- output

/// Serializable mirror of the declarations, used to print witnesses that
/// parse back with [`parse`].
#[derive(Debug, Default, Serialize)]
pub struct SpecOut {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub set: Vec<SetOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub function: Vec<FunctionOut>,
}

#[derive(Debug, Serialize)]
pub struct SetOut {
    pub name: String,
    pub elements: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct FunctionOut {
    pub name: String,
    pub dom: String,
    pub cod: String,
    pub map: BTreeMap<String, String>,
}

impl SpecOut {
    /// Declare `set` under `name` unless an equal set is already declared;
    /// returns the name in use.
    pub fn set(&mut self, name: &str, set: &FinSet) -> String {
        if let Some(s) = self.set.iter().find(|s| s.elements == set.labels()) {
            return s.name.clone();
        }
        let mut n = name.to_owned();
        while self.set.iter().any(|s| s.name == n) {
            n.push('\'');
        }
        self.set.push(SetOut {
            name: n.clone(),
            elements: set.labels().to_vec(),
        });
        n
    }

    pub fn function(&mut self, name: &str, f: &FinFunction, dom: &str, cod: &str) {
        let d = self.set(dom, f.dom());
        let c = self.set(cod, f.cod());
        let map = (0..f.dom().len())
            .map(|i| (f.dom().label(i).to_owned(), f.cod().label(f.apply(i)).to_owned()))
            .collect();
        self.function.push(FunctionOut {
            name: name.to_owned(),
            dom: d,
            cod: c,
            map,
        });
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("witness tables serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
[[set]]
name = "E"
elements = ["a", "b"]

[[set]]
name = "B"
size = 1

[[function]]
name = "p"
dom = "E"
cod = "B"
map = { a = "0", b = "0" }

[[category]]
name = "Two"
objects = ["x", "y"]
morphisms = [["ix", "x", "x"], ["iy", "y", "y"], ["f", "x", "y"]]
identity = { x = "ix", y = "iy" }
compose = [
  ["ix", "ix", "ix"], ["iy", "iy", "iy"],
  ["f", "ix", "f"], ["iy", "f", "f"],
]

[[functor]]
name = "Id"
source = "Two"
target = "Two"
objects = { x = "x", y = "y" }
morphisms = { ix = "ix", iy = "iy", f = "f" }

[[transformation]]
name = "one"
source = "Id"
target = "Id"
components = { x = "ix", y = "iy" }

[task]
map = "p"
"#;

    #[test]
    fn parses_a_complete_spec() {
        let spec = parse(GOOD).unwrap();
        assert_eq!(spec.sets.len(), 2);
        let (_, p) = spec.task_map().unwrap();
        assert_eq!(p.indices(), &[0, 0]);
        assert_eq!(spec.functors[0].1.mor(&"f".to_owned()), "f");
        assert!(spec.transformations[0].1.check_naturality(4).is_empty());
    }

    #[test]
    fn unknown_keys_are_rejected_with_a_line() {
        let src = "[[set]]\nname = \"E\"\nsize = 2\ncolour = \"red\"\n";
        let e = parse(src).unwrap_err();
        assert_eq!(e.line, 4, "{e}");
        assert!(e.message.contains("colour"), "{e}");
    }

    #[test]
    fn use_before_declaration_is_rejected() {
        let src = r#"
[[function]]
name = "p"
dom = "E"
cod = "E"
map = {}

[[set]]
name = "E"
size = 0
"#;
        let e = parse(src).unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("before its declaration"), "{e}");
    }

    #[test]
    fn partial_function_is_rejected() {
        let src = "[[set]]\nname = \"E\"\nsize = 2\n\n[[function]]\nname = \"f\"\ndom = \"E\"\ncod = \"E\"\nmap = { 0 = \"1\" }\n";
        let e = parse(src).unwrap_err();
        assert_eq!(e.line, 9);
        assert!(e.message.contains("no value at `1`"), "{e}");
    }

    #[test]
    fn emitted_declarations_parse_back() {
        let e = FinSet::new(["a", "b c", "\"q\""]).unwrap();
        let b = FinSet::range(2);
        let f = FinFunction::new(e.clone(), b.clone(), vec![0, 1, 1]).unwrap();
        let mut out = SpecOut::default();
        out.function("f", &f, "E", "B");
        out.function("g", &FinFunction::identity(&b), "B", "B");
        let spec = parse(&out.to_toml()).unwrap();
        assert_eq!(spec.function("f"), Some(&f));
        assert_eq!(spec.sets.len(), 2);
    }
}
