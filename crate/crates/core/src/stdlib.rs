//! Bundled example programs with their universes, modes and expected
//! results.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagnostic::Diagnostic;
use crate::parser::{parse_domain, parse_program_named, parse_relation_data, DataError};
use crate::semantics::{Relation, Structure};
use crate::syntax::Program;
use crate::transpile::{parse_modes, ModeDecl};

/// Names accepted by [`load_example`].
pub const EXAMPLES: [&str; 5] = [
    "evenOdd",
    "sortSpec",
    "sortMerge",
    "deBruijn",
    "newtonSqrt2",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no example named `{0}` (known: evenOdd, sortSpec, sortMerge, deBruijn, newtonSqrt2)")]
pub struct UnknownExample(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExamplePack {
    pub name: &'static str,
    pub program_text: &'static str,
    pub domain_text: &'static str,
    pub mode_text: Option<&'static str>,
    /// Expected relations in `.rdata` form.
    pub expected_text: Option<&'static str>,
    /// Rounds after which `expected_text` holds; `None` means at the fixpoint.
    pub expected_rounds: Option<usize>,
    /// Expected rendering of the lowered program.
    pub golden_text: Option<&'static str>,
}

macro_rules! pack_file {
    ($name:literal, $file:literal) => {
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/examples/",
            $name,
            "/",
            $file
        ))
    };
}

impl ExamplePack {
    pub fn program(&self) -> Result<Program, Vec<Diagnostic>> {
        parse_program_named(
            self.program_text,
            Some(&format!("{}/program.rel", self.name)),
        )
    }

    pub fn structure(&self, p: &Program) -> Result<Structure, DataError> {
        parse_domain(self.domain_text, p)
            .map_err(|e| e.with_file(&format!("{}/domain.dom", self.name)))
    }

    pub fn modes(&self) -> Option<Result<ModeDecl, Vec<Diagnostic>>> {
        self.mode_text.map(parse_modes)
    }

    pub fn expected(
        &self,
        p: &Program,
        s: &Structure,
    ) -> Option<Result<BTreeMap<String, Relation>, DataError>> {
        self.expected_text
            .map(|t| parse_relation_data(t, &p.signature, s))
    }
}

pub fn load_example(name: &str) -> Result<ExamplePack, UnknownExample> {
    let base = ExamplePack {
        name: "",
        program_text: "",
        domain_text: "",
        mode_text: None,
        expected_text: None,
        expected_rounds: None,
        golden_text: None,
    };
    Ok(match name {
        "evenOdd" => ExamplePack {
            name: "evenOdd",
            program_text: pack_file!("evenOdd", "program.rel"),
            domain_text: pack_file!("evenOdd", "domain.dom"),
            mode_text: Some(pack_file!("evenOdd", "modes.modes")),
            expected_text: Some(pack_file!("evenOdd", "expected.rdata")),
            ..base
        },
        "sortSpec" => ExamplePack {
            name: "sortSpec",
            program_text: pack_file!("sortSpec", "program.rel"),
            domain_text: pack_file!("sortSpec", "domain.dom"),
            expected_text: Some(pack_file!("sortSpec", "expected.rdata")),
            ..base
        },
        "sortMerge" => ExamplePack {
            name: "sortMerge",
            program_text: pack_file!("sortMerge", "program.rel"),
            domain_text: pack_file!("sortMerge", "domain.dom"),
            mode_text: Some(pack_file!("sortMerge", "modes.modes")),
            expected_text: Some(pack_file!("sortMerge", "expected.rdata")),
            ..base
        },
        "deBruijn" => ExamplePack {
            name: "deBruijn",
            program_text: pack_file!("deBruijn", "program.rel"),
            domain_text: pack_file!("deBruijn", "domain.dom"),
            mode_text: Some(pack_file!("deBruijn", "modes.modes")),
            golden_text: Some(pack_file!("deBruijn", "golden.proc")),
            ..base
        },
        "newtonSqrt2" => ExamplePack {
            name: "newtonSqrt2",
            program_text: pack_file!("newtonSqrt2", "program.rel"),
            domain_text: pack_file!("newtonSqrt2", "domain.dom"),
            expected_text: Some(pack_file!("newtonSqrt2", "expected.rdata")),
            expected_rounds: Some(4),
            ..base
        },
        other => return Err(UnknownExample(other.to_string())),
    })
}
