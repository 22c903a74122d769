//! Executes parsed scripts.
//!
//! Declarations are evaluated first, in order, and any name, type or
//! construction error stops the run before a single check executes. Checks
//! then run in script order with seeds derived from the check index.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use crate::algebra::{AlgebraElement, WStarAlgebra};
use crate::category::{product, ProductStructure};
use crate::morphism::{Counts, MultiplicityData, StarHom};
use crate::random::derive_seed;
use crate::report::{write_json, CheckReport, Status};
use crate::script::{parse, Pos, Script, ScriptError, Statement, UnitarySpec};
use crate::suites::{accepts, defaults, run_suite, signature, ArgKind, SuiteArg, SuiteParams};
use crate::tensor::{tensor_algebra, TensorStructure};
use crate::CMatrix;

/// The script run by `wstar suite --all`.
pub const ACCEPTANCE_SCRIPT: &str = include_str!("acceptance.wstar");

#[derive(Clone, Debug)]
enum Value {
    Algebra(WStarAlgebra),
    Elem(AlgebraElement, WStarAlgebra),
    Hom(StarHom),
    Tensor(TensorStructure),
    Product(ProductStructure),
}

impl Value {
    fn kind_name(&self) -> &'static str {
        match self {
            Value::Algebra(_) => "algebra",
            Value::Elem(..) => "element",
            Value::Hom(_) => "morphism",
            Value::Tensor(_) => "tensor product",
            Value::Product(_) => "product",
        }
    }

    /// The underlying algebra, for values usable as objects.
    fn algebra(&self) -> Option<&WStarAlgebra> {
        match self {
            Value::Algebra(a) => Some(a),
            Value::Tensor(t) => Some(t.total()),
            Value::Product(p) => Some(p.product()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RunError {
    Script(ScriptError),
    Io { path: String, message: String },
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Script(e) => write!(f, "{e}"),
            RunError::Io { path, message } => write!(f, "cannot write {path}: {message}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub reports: Vec<CheckReport>,
    pub exit_code: i32,
    pub error: Option<RunError>,
}

impl RunOutcome {
    fn failed(error: RunError) -> Self {
        Self {
            reports: Vec::new(),
            exit_code: 2,
            error: Some(error),
        }
    }
}

/// 0 if every report passed, 2 if any errored, otherwise 1.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Error) {
        2
    } else if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}

struct PendingCheck {
    suite: String,
    args: Vec<SuiteArg>,
    params: SuiteParams,
}

struct Env {
    values: HashMap<String, Value>,
}

fn name_error(pos: Pos, message: impl Into<String>) -> ScriptError {
    ScriptError::Name {
        pos,
        message: message.into(),
    }
}

fn type_error(pos: Pos, message: impl Into<String>) -> ScriptError {
    ScriptError::Type {
        pos,
        message: message.into(),
    }
}

impl Env {
    fn get(&self, pos: Pos, name: &str) -> Result<&Value, ScriptError> {
        self.values
            .get(name)
            .ok_or_else(|| name_error(pos, format!("'{name}' is not declared")))
    }

    fn algebra(&self, pos: Pos, name: &str) -> Result<WStarAlgebra, ScriptError> {
        let v = self.get(pos, name)?;
        v.algebra()
            .cloned()
            .ok_or_else(|| type_error(pos, format!("'{name}' is a {}, expected an algebra", v.kind_name())))
    }

    fn hom(&self, pos: Pos, name: &str) -> Result<StarHom, ScriptError> {
        match self.get(pos, name)? {
            Value::Hom(f) => Ok(f.clone()),
            v => Err(type_error(pos, format!("'{name}' is a {}, expected a morphism", v.kind_name()))),
        }
    }

    fn define(&mut self, pos: Pos, name: &str, value: Value) -> Result<(), ScriptError> {
        if self.values.contains_key(name) {
            return Err(name_error(pos, format!("'{name}' is already declared")));
        }
        self.values.insert(name.to_string(), value);
        Ok(())
    }
}

fn element(pos: Pos, alg: &WStarAlgebra, blocks: &[Vec<Vec<crate::C64>>]) -> Result<AlgebraElement, ScriptError> {
    if blocks.len() != alg.num_blocks() {
        return Err(type_error(
            pos,
            format!("{} blocks given for an algebra with {}", blocks.len(), alg.num_blocks()),
        ));
    }
    let mut out = Vec::with_capacity(blocks.len());
    for (k, (rows, &n)) in blocks.iter().zip(alg.sizes()).enumerate() {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(type_error(pos, format!("block {k} must be {n}x{n}")));
        }
        out.push(CMatrix::from_fn(n, n, |i, j| rows[i][j]));
    }
    Ok(AlgebraElement::from_blocks(out))
}

fn declare(env: &mut Env, pos: Pos, stmt: &Statement) -> Result<(), ScriptError> {
    let invalid = |source| ScriptError::Invalid { pos, source };
    match stmt {
        Statement::Algebra { name, sizes } => {
            let a = WStarAlgebra::from_sizes(sizes).map_err(invalid)?;
            env.define(pos, name, Value::Algebra(a))
        }
        Statement::Elem { name, algebra, blocks } => {
            let a = env.algebra(pos, algebra)?;
            let x = element(pos, &a, blocks)?;
            env.define(pos, name, Value::Elem(x, a))
        }
        Statement::Hom {
            name,
            source,
            target,
            counts,
            unitary,
        } => {
            let (s, t) = (env.algebra(pos, source)?, env.algebra(pos, target)?);
            if counts.len() != t.num_blocks() || counts.iter().any(|row| row.len() != s.num_blocks()) {
                return Err(type_error(
                    pos,
                    format!("multiplicity matrix must be {}x{}", t.num_blocks(), s.num_blocks()),
                ));
            }
            let counts = Counts(counts.clone());
            let data = match unitary {
                UnitarySpec::Default => MultiplicityData::with_identity_unitaries(counts, &t),
                UnitarySpec::Named(u) => match env.get(pos, u)? {
                    Value::Elem(x, alg) if alg == &t => MultiplicityData {
                        counts,
                        unitaries: x.blocks.clone(),
                    },
                    Value::Elem(_, alg) => {
                        return Err(type_error(
                            pos,
                            format!("'{u}' lives in {:?}, expected the target {:?}", alg.sizes(), t.sizes()),
                        ))
                    }
                    v => return Err(type_error(pos, format!("'{u}' is a {}, expected an element", v.kind_name()))),
                },
            };
            let f = StarHom::from_multiplicity(&s, &t, &data).map_err(invalid)?;
            env.define(pos, name, Value::Hom(f))
        }
        Statement::Tensor { name, left, right } => {
            let (a, b) = (env.algebra(pos, left)?, env.algebra(pos, right)?);
            env.define(pos, name, Value::Tensor(tensor_algebra(&a, &b)))
        }
        Statement::Product { name, factors } => {
            let algs = factors
                .iter()
                .map(|f| env.algebra(pos, f))
                .collect::<Result<Vec<_>, _>>()?;
            env.define(pos, name, Value::Product(product(&algs)))
        }
        Statement::Mediator { name, left, right } => {
            let (f, g) = (env.hom(pos, left)?, env.hom(pos, right)?);
            if f.target() != g.target() {
                return Err(type_error(
                    pos,
                    format!("'{left}' and '{right}' land in {:?} and {:?}", f.target().sizes(), g.target().sizes()),
                ));
            }
            let t = crate::tensor::mediator(&f, &g).map_err(invalid)?;
            env.define(pos, name, Value::Hom(t))
        }
        Statement::Check { .. } | Statement::Report { .. } => Ok(()),
    }
}

fn pending_check(env: &Env, pos: Pos, stmt: &Statement, seed: u64) -> Result<PendingCheck, ScriptError> {
    let Statement::Check {
        suite,
        args,
        trials,
        tol,
        inject,
        ..
    } = stmt
    else {
        unreachable!("only called on checks")
    };
    if defaults(suite).is_none() {
        return Err(name_error(pos, format!("unknown suite '{suite}'")));
    }
    let mut resolved = Vec::with_capacity(args.len());
    for a in args {
        resolved.push(match env.get(pos, a)? {
            Value::Algebra(x) => SuiteArg::Algebra(x.clone()),
            Value::Tensor(t) => SuiteArg::Tensor(t.clone()),
            Value::Product(p) => SuiteArg::Product(p.clone()),
            Value::Hom(f) => SuiteArg::Hom(f.clone()),
            Value::Elem(..) => return Err(type_error(pos, format!("'{a}' is an element; suites take objects or morphisms"))),
        });
    }
    let kinds: Vec<ArgKind> = resolved.iter().map(SuiteArg::kind).collect();
    if !accepts(suite, &kinds) {
        return Err(type_error(
            pos,
            format!("{suite} expects {}, got {kinds:?}", signature(suite)),
        ));
    }
    Ok(PendingCheck {
        suite: suite.clone(),
        args: resolved,
        params: SuiteParams {
            trials: *trials,
            seed,
            tol: *tol,
            inject: *inject,
        },
    })
}

/// Runs a parsed script. With `seed_override`, check `k` uses
/// `derive_seed(root, k)` regardless of its own `seed=`; otherwise an
/// explicit `seed=` wins and the rest use `derive_seed(0, k)`.
/// `report json` targets are written after all checks complete.
pub fn run(script: &Script, seed_override: Option<u64>) -> RunOutcome {
    let mut env = Env { values: HashMap::new() };
    let mut checks = Vec::new();
    let mut paths = Vec::new();
    for (stmt, &pos) in script.statements.iter().zip(&script.positions) {
        if let Err(e) = declare(&mut env, pos, stmt) {
            return RunOutcome::failed(RunError::Script(e));
        }
        match stmt {
            Statement::Check { seed, .. } => {
                let k = checks.len() as u64;
                let seed = match seed_override {
                    Some(root) => derive_seed(root, k),
                    None => seed.unwrap_or_else(|| derive_seed(0, k)),
                };
                match pending_check(&env, pos, stmt, seed) {
                    Ok(c) => checks.push(c),
                    Err(e) => return RunOutcome::failed(RunError::Script(e)),
                }
            }
            Statement::Report { path } => paths.push(path.clone()),
            _ => {}
        }
    }

    let reports: Vec<CheckReport> = checks
        .iter()
        .map(|c| run_suite(&c.suite, &c.args, &c.params))
        .collect();
    let mut outcome = RunOutcome {
        exit_code: exit_code(&reports),
        reports,
        error: None,
    };
    for path in paths {
        if let Err(e) = emit_report(&outcome.reports, Path::new(&path)) {
            outcome.exit_code = 2;
            outcome.error = Some(RunError::Io {
                path,
                message: e.to_string(),
            });
            break;
        }
    }
    outcome
}

/// Parses and runs; parse errors give exit code 2.
pub fn run_text(text: &str, seed_override: Option<u64>) -> RunOutcome {
    match parse(text) {
        Ok(script) => run(&script, seed_override),
        Err(e) => RunOutcome::failed(RunError::Script(e)),
    }
}

pub fn emit_report(reports: &[CheckReport], path: &Path) -> std::io::Result<()> {
    write_json(reports, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn empty_script() {
        let out = run_text("", None);
        assert!(out.reports.is_empty());
        assert_eq!(out.exit_code, 0);
        assert_eq!(crate::report::to_json(&out.reports), "[]");
    }

    #[test]
    fn cross_norm_check_with_explicit_seed() {
        let out = run_text(
            "algebra A = [2]\nalgebra B = [3]\ncheck cross_norm A B trials=100 seed=7 tol=1e-9\n",
            None,
        );
        assert_eq!(out.exit_code, 0, "{out:?}");
        assert_eq!(out.reports[0].name, "cross_norm");
        assert_eq!(out.reports[0].seed, 7);
        assert!(out.reports[0].passed());
    }

    #[test]
    fn equivalence_check_from_script() {
        let out = run_text("algebra A = [2,1]\nalgebra B = [2]\ncheck equivalence A B tol=1e-12", None);
        assert_eq!(out.exit_code, 0);
        assert!(out.reports[0].max_error <= 1e-12);
    }

    #[test]
    fn diagonal_embedding_hom() {
        let text = "algebra A = [1,1]\nalgebra B = [2]\nhom f : A -> B = mult [[1,1]] unitary default\ncheck verify_hom f";
        let out = run_text(text, None);
        assert_eq!(out.exit_code, 0, "{out:?}");
    }

    #[test]
    fn seeds_derive_from_root() {
        let text = "algebra A = [2]\ncheck cross_norm A A seed=5\ncheck cross_norm A A";
        let plain = run_text(text, None);
        assert_eq!(plain.reports[0].seed, 5);
        assert_eq!(plain.reports[1].seed, derive_seed(0, 1));
        let rooted = run_text(text, Some(42));
        assert_eq!(rooted.reports[0].seed, derive_seed(42, 0));
        assert_eq!(rooted.reports[1].seed, derive_seed(42, 1));
    }

    #[test]
    fn name_and_type_errors() {
        let out = run_text("check cross_norm A B", None);
        assert!(matches!(out.error, Some(RunError::Script(ScriptError::Name { .. }))));
        assert_eq!(out.exit_code, 2);
        let out = run_text("algebra A = [2]\nelem x in A = { [[1]] }", None);
        assert!(matches!(out.error, Some(RunError::Script(ScriptError::Type { pos: Pos { line: 2, .. }, .. }))));
        let out = run_text("algebra A = [2]\nalgebra B = [1]\nhom f : A -> B = mult [[1]] unitary default", None);
        assert!(matches!(
            out.error,
            Some(RunError::Script(ScriptError::Invalid {
                source: Error::MultiplicityOverflow { .. },
                ..
            }))
        ));
        let out = run_text("algebra A = [2]\ncheck equivalence A", None);
        assert!(matches!(out.error, Some(RunError::Script(ScriptError::Type { .. }))));
        let out = run_text("algebra A = [2]\ncheck nonsense A", None);
        assert!(matches!(out.error, Some(RunError::Script(ScriptError::Name { .. }))));
    }

    #[test]
    fn named_unitary_and_mediator() {
        let text = "\
algebra A = [1]
algebra B = [2]
algebra M = [2]
elem w in M = { [[0, 1], [1, 0]] }
hom f : A -> M = mult [[2]] unitary default
hom g : B -> M = mult [[1]] unitary w
mediator m = mediate(f, g)
check verify_hom m
";
        let out = run_text(text, None);
        assert_eq!(out.exit_code, 0, "{out:?}");
        let bad = "algebra A = [2]\nelem w in A = { [[1, 1], [0, 1]] }\nhom f : A -> A = mult [[1]] unitary w";
        let out = run_text(bad, None);
        assert!(matches!(
            out.error,
            Some(RunError::Script(ScriptError::Invalid {
                source: Error::NotUnitary { .. },
                ..
            }))
        ));
    }

    #[test]
    fn non_commuting_mediator_is_rejected() {
        let text = "algebra A = [2]\nhom f : A -> A = mult [[1]] unitary default\nmediator m = mediate(f, f)";
        let out = run_text(text, None);
        assert!(matches!(
            out.error,
            Some(RunError::Script(ScriptError::Invalid {
                source: Error::RangesDoNotCommute { .. },
                ..
            }))
        ));
    }

    #[test]
    fn failing_check_exit_code() {
        let out = run_text("algebra A = [2]\nalgebra B = [1,1]\ncheck orthogonal_sum A B trials=2 inject=1e-6", None);
        assert_eq!(out.exit_code, 1);
        assert!(out.reports[0].witness.is_some());
    }

    #[test]
    fn acceptance_script_parses() {
        let script = parse(ACCEPTANCE_SCRIPT).unwrap();
        assert!(!script.statements.is_empty());
    }
}
