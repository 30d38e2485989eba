//! Values, universes, interpretations and the satisfaction relation.

mod eval;
mod interp;
mod structure;
pub mod value;

pub(crate) use eval::{atom_holds, eval_cterm, CAtom, CBody, CPred, CTerm, Compiler, Evaluator};
pub use eval::{eval_term, relation_of, relation_over, satisfies, Assignment, EvalError, Formula};
pub use interp::{InterpError, Interpretation, Relation, Tuple};
pub use structure::{
    default_builtin, for_each_tuple, parse_numeral, Builtin, CmpOp, CustomFn, Domain, DomainKind,
    FunctionTable, LiteralMode, NonEnumerable, OpenKind, Structure, StructureError,
};
pub use value::{Fault, Value};
