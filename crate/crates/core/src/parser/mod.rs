//! Text formats: programs, relation data, domain descriptions.

pub mod data;
pub mod lexer;
mod print;
mod program;

pub use data::{
    parse_atom, parse_call, parse_domain, parse_interpretation, parse_relation_data, parse_value,
    print_relation_data, DataError, DataErrorKind,
};
pub use print::{pretty_print, print_atom, print_clause, print_disjunct, print_term};
pub use program::{parse_program, parse_program_named};
