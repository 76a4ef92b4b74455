//! The JSON workspace document: a Lie algebra, named modules, optional
//! metrics and derivations, and a task list. Rationals are encoded as
//! "p/q" strings; matrices as row-major arrays of such strings. The schema
//! is versioned through the `schema` field.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use liemod::adjoint::Derivation;
use liemod::form::{EForm, Form, MultiIndex};
use liemod::graded::GradedVectorSpace;
use liemod::matrix::Matrix;
use liemod::metric::Metric;
use liemod::module::AModule;
use liemod::rational;
use liemod::LieAlgebra;

use crate::error::CliError;

pub const SCHEMA: &str = "liemod/1";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceDoc {
    pub schema: String,
    pub algebra: AlgebraDoc,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, MetricDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub derivations: BTreeMap<String, DerivationDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<TaskDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub brackets: Vec<BracketDoc>,
}

/// [pair.0, pair.1] = sum over result of coeff * generator.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDoc {
    pub pair: [String; 2],
    pub result: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub generators: Vec<GeneratorDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub action: BTreeMap<String, Vec<ActionTermDoc>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub name: String,
    pub degree: i32,
}

/// One term coeff * xi^{form} x gen of a Q-action value.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionTermDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub form: Vec<String>,
    pub coeff: String,
    pub gen: String,
}

/// Degree (as a decimal string key) -> symmetric positive-definite matrix.
pub type MetricDoc = BTreeMap<String, Vec<Vec<String>>>;

/// Generator name -> value of the derivation on its dual generator.
pub type DerivationDoc = BTreeMap<String, Vec<FormTermDoc>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormTermDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub form: Vec<String>,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskDoc {
    pub command: String,
    #[serde(flatten)]
    pub params: BTreeMap<String, serde_json::Value>,
}

pub fn parse_document(text: &str) -> Result<WorkspaceDoc, CliError> {
    let doc: WorkspaceDoc = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))?;
    if doc.schema != SCHEMA {
        return Err(CliError::Parse(format!(
            "unsupported schema `{}`, expected `{SCHEMA}`",
            doc.schema
        )));
    }
    Ok(doc)
}

fn parse_rational(s: &str, context: &str) -> Result<rational::Rational, CliError> {
    rational::parse(s)
        .ok_or_else(|| CliError::Parse(format!("{context}: `{s}` is not a rational \"p/q\"")))
}

pub fn build_algebra(doc: &AlgebraDoc) -> Result<Arc<LieAlgebra>, CliError> {
    let n = doc.generators.len();
    let index = |name: &str| -> Result<usize, CliError> {
        doc.generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| CliError::Parse(format!("unknown generator `{name}`")))
    };
    let mut brackets = BTreeMap::new();
    for b in &doc.brackets {
        let (mut i, mut j) = (index(&b.pair[0])?, index(&b.pair[1])?);
        let mut flip = false;
        if i == j {
            return Err(CliError::Parse(format!(
                "bracket [{0},{0}] is zero by antisymmetry",
                b.pair[0]
            )));
        }
        if i > j {
            (i, j) = (j, i);
            flip = true;
        }
        let mut coeffs = vec![rational::rat(0); n];
        for (gen, c) in &b.result {
            let k = index(gen)?;
            let mut v = parse_rational(c, &format!("bracket [{},{}]", b.pair[0], b.pair[1]))?;
            if flip {
                v = -v;
            }
            coeffs[k] = v;
        }
        if brackets.insert((i, j), coeffs).is_some() {
            return Err(CliError::Parse(format!(
                "bracket [{},{}] given twice",
                b.pair[0], b.pair[1]
            )));
        }
    }
    LieAlgebra::new(doc.generators.clone(), brackets).map_err(|e| CliError::Parse(e.to_string()))
}

fn form_index(g: &LieAlgebra, names: &[String], context: &str) -> Result<MultiIndex, CliError> {
    let mut seen = Vec::new();
    for n in names {
        let i = g.generator_index(n).ok_or_else(|| {
            CliError::Parse(format!("{context}: unknown generator `{n}` in form"))
        })?;
        if seen.contains(&i) {
            return Err(CliError::Parse(format!(
                "{context}: repeated generator `{n}` in form"
            )));
        }
        seen.push(i);
    }
    // the document lists factors in increasing order; reject unsorted input
    // so that documents have one canonical spelling
    let mut sorted = seen.clone();
    sorted.sort_unstable();
    if sorted != seen {
        return Err(CliError::Parse(format!(
            "{context}: form factors must be listed in basis order"
        )));
    }
    Ok(MultiIndex::from_indices(&seen))
}

pub fn build_module(g: &Arc<LieAlgebra>, name: &str, doc: &ModuleDoc) -> Result<AModule, CliError> {
    let mut by_degree: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    for gen in &doc.generators {
        by_degree
            .entry(gen.degree)
            .or_default()
            .push(gen.name.clone());
    }
    let space = GradedVectorSpace::new(by_degree.into_iter().collect())
        .map_err(|e| CliError::Parse(format!("module `{name}`: {e}")))?;
    let mut action = BTreeMap::new();
    for (gen, terms) in &doc.action {
        let mut value = EForm::zero(space.clone());
        for t in terms {
            let context = format!("module `{name}`, action on `{gen}`");
            let idx = form_index(g, &t.form, &context)?;
            let coeff = parse_rational(&t.coeff, &context)?;
            let (d, i) = space.locate(&t.gen).ok_or_else(|| {
                CliError::Parse(format!("{context}: unknown generator `{}`", t.gen))
            })?;
            let mut v = vec![rational::rat(0); space.rank(d)];
            v[i] = coeff;
            value.add_term(idx, d, v);
        }
        action.insert(gen.clone(), value);
    }
    AModule::from_q_action(g.clone(), space, &action)
        .map_err(|e| CliError::Parse(format!("module `{name}`: {e}")))
}

pub fn build_metric(
    space: &Arc<GradedVectorSpace>,
    name: &str,
    doc: &MetricDoc,
) -> Result<Metric, CliError> {
    let mut blocks = BTreeMap::new();
    for (deg, rows) in doc {
        let d: i32 = deg
            .parse()
            .map_err(|_| CliError::Parse(format!("metric `{name}`: bad degree key `{deg}`")))?;
        let mut parsed = Vec::new();
        for row in rows {
            let mut out = Vec::new();
            for entry in row {
                out.push(parse_rational(
                    entry,
                    &format!("metric `{name}` at degree {d}"),
                )?);
            }
            parsed.push(out);
        }
        blocks.insert(d, Matrix::from_rows(parsed));
    }
    Metric::new(space.clone(), blocks).map_err(|e| CliError::Parse(format!("metric `{name}`: {e}")))
}

pub fn build_derivation(
    g: &Arc<LieAlgebra>,
    name: &str,
    doc: &DerivationDoc,
) -> Result<Derivation, CliError> {
    let mut action = vec![Form::zero(); g.dim()];
    let mut value_degree: Option<u32> = None;
    for (gen, terms) in doc {
        let i = g.generator_index(gen).ok_or_else(|| {
            CliError::Parse(format!("derivation `{name}`: unknown generator `{gen}`"))
        })?;
        for t in terms {
            let context = format!("derivation `{name}` on `{gen}`");
            let idx = form_index(g, &t.form, &context)?;
            let coeff = parse_rational(&t.coeff, &context)?;
            match value_degree {
                None => value_degree = Some(idx.degree()),
                Some(d) if d != idx.degree() => {
                    return Err(CliError::Parse(format!(
                        "derivation `{name}`: mixed value degrees {d} and {}",
                        idx.degree()
                    )))
                }
                _ => {}
            }
            action[i].add_term(idx, coeff);
        }
    }
    let value_degree =
        value_degree.ok_or_else(|| CliError::Parse(format!("derivation `{name}` is empty")))?;
    Derivation::new(g.clone(), value_degree as i32 - 1, action)
        .map_err(|e| CliError::Parse(format!("derivation `{name}`: {e}")))
}

/// Emit a module back into document form; `emit . build` is the identity on
/// canonical documents and `build . emit` is the identity on modules.
pub fn emit_module(module: &AModule) -> ModuleDoc {
    let g = module.algebra();
    let gens = module.generators();
    let generators = gens
        .iter_basis()
        .map(|(degree, _, name)| GeneratorDoc {
            name: name.to_string(),
            degree,
        })
        .collect();
    let mut action = BTreeMap::new();
    for (d, i, name) in gens.iter_basis() {
        let value = module.q_generator(d, i);
        let mut terms = Vec::new();
        for (idx, dd, v) in value.terms() {
            for (c, coeff) in v.iter().enumerate() {
                if rational::is_zero(coeff) {
                    continue;
                }
                terms.push(ActionTermDoc {
                    form: idx
                        .indices()
                        .iter()
                        .map(|&k| g.names()[k].clone())
                        .collect(),
                    coeff: rational::format(coeff),
                    gen: gens.names(dd)[c].clone(),
                });
            }
        }
        if !terms.is_empty() {
            action.insert(name.to_string(), terms);
        }
    }
    ModuleDoc { generators, action }
}

/// Wrap a constructed module as a standalone document over the same algebra.
pub fn module_document(algebra: &AlgebraDoc, name: &str, module: &AModule) -> WorkspaceDoc {
    let mut modules = BTreeMap::new();
    modules.insert(name.to_string(), emit_module(module));
    WorkspaceDoc {
        schema: SCHEMA.to_string(),
        algebra: algebra.clone(),
        modules,
        metrics: BTreeMap::new(),
        derivations: BTreeMap::new(),
        tasks: Vec::new(),
    }
}

pub fn to_json(doc: &WorkspaceDoc) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents serialize");
    out.push('\n');
    out
}
