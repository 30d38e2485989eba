//! Mode analysis, lowering to a small procedural IR, rendering and
//! execution of that IR.

mod agree;
mod exec;
mod ir;
mod lower;
mod modes;
mod render;

use thiserror::Error;

use crate::diagnostic::Diagnostic;
use crate::fixpoint::{FixpointError, Status};

pub use agree::{agree_with_fixpoint, check_agreement, AgreementReport, Disagreement, Query};
pub use exec::{execute, execute_with_data, ExecConfig, ExecError, Execution, Outcome};
pub use ir::{Branch, Cond, ProcFunction, ProcUnit, Stmt};
pub use lower::{lower, mode_check};
pub use modes::{parse_modes, Mode, ModeDecl};
pub use render::{render, render_with, RenderOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TranspileError {
    #[error("mode errors: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Modes(Vec<Diagnostic>),
    #[error(transparent)]
    Fixpoint(#[from] FixpointError),
    #[error("fixpoint iteration stopped early ({0})")]
    NoFixpoint(Status),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostic::DiagCode;
    use crate::parser::parse_program;
    use crate::semantics::{Domain, LiteralMode, OpenKind, Structure, Value};

    const QR: &str = "func +/2, -/2, */2; pred q/4, aux/5; extern pred </2, <=/2;
        q(a, b, m, u) <-
            a < b /\\ m = 0 /\\ u = a \\/
            b <= a /\\ a < b + b /\\ m = 1 /\\ u = a - b \\/
            exists n, v. b + b <= a /\\ q(a, b + b, n, v) /\\ aux(b, m, u, n, v);
        aux(b, m, u, n, v) <-
            v < b /\\ m = 2 * n /\\ u = v \\/
            b <= v /\\ m = 2 * n + 1 /\\ u = v - b;";

    fn setup() -> (crate::Program, ModeDecl, Structure) {
        let p = parse_program(QR).unwrap();
        let m = parse_modes("q: in,in,out,out\naux: in,out,out,in,in").unwrap();
        let s = Structure::for_signature(
            &p.signature,
            Domain::open(OpenKind::Any),
            LiteralMode::Exact,
        )
        .unwrap();
        (p, m, s)
    }

    #[test]
    fn quotient_lowering() {
        let (p, m, s) = setup();
        assert!(mode_check(&p, &m, &s).is_empty());
        let u = lower(&p, &m, &s).unwrap();
        let plain = render_with(&u, RenderOptions { provenance: false });
        assert!(
            plain.starts_with("bool q(a, b, m, u){\n  if (a < b) { m = 0; u = a; return true; }\n")
        );
        assert!(plain.contains("  if (b+b <= a) { loc n; loc v; // local variables\n    return q(a, b+b, n, v) && aux(b, m, u, n, v);\n  }\n"));
        assert!(plain.contains("  if (b <= v) { m = 2*n+1; u = v-b; return true; }\n"));
        assert!(render(&u).contains("  // disjunct 0: a < b /\\ m = 0 /\\ u = a\n"));
        assert_eq!(render(&ProcUnit::default()), "");
    }

    #[test]
    fn quotient_execution() {
        let (p, m, s) = setup();
        let u = lower(&p, &m, &s).unwrap();
        let run = |a: i64, b: i64| {
            execute(
                &u,
                "q",
                &[Value::int(a), Value::int(b)],
                &s,
                ExecConfig::default(),
            )
            .unwrap()
        };
        assert_eq!(
            run(5, 7).outcome,
            Outcome::Success(vec![Value::int(0), Value::int(5)])
        );
        assert_eq!(
            run(10, 3).outcome,
            Outcome::Success(vec![Value::int(3), Value::int(1)])
        );
        let deep = execute(
            &u,
            "q",
            &[Value::int(1 << 20), Value::int(1)],
            &s,
            ExecConfig { max_depth: 5 },
        );
        assert_eq!(deep, Err(ExecError::ResourceLimit(5)));
        let bad = execute(
            &u,
            "q",
            &[Value::atom("x"), Value::int(1)],
            &s,
            ExecConfig::default(),
        );
        assert!(matches!(bad, Err(ExecError::TypeError(_))));
    }

    #[test]
    fn mode_errors() {
        let (p, _, s) = setup();
        let only_q = parse_modes("q: in,in,out,out").unwrap();
        let d = mode_check(&p, &only_q, &s);
        assert!(d.iter().any(|d| d.code == DiagCode::MissingMode));
        let p2 = parse_program("func s/1; pred p/2; p(x, y) <- y = s(x);").unwrap();
        let s2 = Structure::for_signature(
            &p2.signature,
            Domain::open(OpenKind::Integer),
            LiteralMode::Exact,
        )
        .unwrap();
        let u = lower(&p2, &parse_modes("p: in,out").unwrap(), &s2).unwrap();
        assert_eq!(u.functions[0].branches.len(), 1);
        assert!(
            matches!(&u.functions[0].branches[0].steps[..], [Stmt::Assign { var, .. }] if var == "y")
        );
        let d = mode_check(&p2, &parse_modes("p: out,out").unwrap(), &s2);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, DiagCode::UnboundVariable);
        let d = mode_check(&p2, &parse_modes("p: in,in,in").unwrap(), &s2);
        assert_eq!(d[0].code, DiagCode::ModeArityMismatch);
    }
}
