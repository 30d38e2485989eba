//! Locating and reading the input files of a command.

use std::fs;
use std::path::{Path, PathBuf};

use relkit::parser::{parse_domain, parse_program_named};
use relkit::semantics::{Domain, LiteralMode, OpenKind, Structure};
use relkit::transpile::{parse_modes, ModeDecl};
use relkit::{validate, Program};

use crate::Exit;

pub fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path)
        .map_err(|e| Exit::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Program, domain and mode paths. A directory stands for its
/// `program.rel`, `domain.dom` and `modes.modes`.
pub struct Inputs {
    program: PathBuf,
    domain: Option<PathBuf>,
    modes: Option<PathBuf>,
}

impl Inputs {
    pub fn resolve(
        program: PathBuf,
        domain: Option<PathBuf>,
        modes: Option<PathBuf>,
    ) -> Result<Inputs, Exit> {
        if !program.exists() {
            return Err(Exit::Usage(format!(
                "{}: no such file or directory",
                program.display()
            )));
        }
        if !program.is_dir() {
            return Ok(Inputs {
                program,
                domain,
                modes,
            });
        }
        let beside = |name: &str| Some(program.join(name)).filter(|p| p.is_file());
        Ok(Inputs {
            domain: domain.or_else(|| beside("domain.dom")),
            modes: modes.or_else(|| beside("modes.modes")),
            program: program.join("program.rel"),
        })
    }

    pub fn program_name(&self) -> String {
        self.program.display().to_string()
    }

    pub fn read_program(&self) -> Result<String, Exit> {
        read(&self.program)
    }

    /// The parsed program; any parse or validation finding is fatal.
    pub fn program(&self) -> Result<Program, Exit> {
        let text = self.read_program()?;
        let lines = |ds: Vec<relkit::Diagnostic>| {
            Exit::Diagnostics(ds.iter().map(ToString::to_string).collect())
        };
        let p = parse_program_named(&text, Some(&self.program_name())).map_err(lines)?;
        let diags = validate(&p);
        if diags.is_empty() {
            Ok(p)
        } else {
            Err(lines(diags))
        }
    }

    pub fn structure(&self, p: &Program) -> Result<Structure, Exit> {
        let path = self.domain.as_ref().ok_or_else(|| {
            Exit::Usage("no domain given (pass a domain file or use an example directory)".into())
        })?;
        let text = read(path)?;
        parse_domain(&text, p)
            .map_err(|e| Exit::Usage(e.with_file(&path.display().to_string()).to_string()))
    }

    /// As [`Inputs::structure`], falling back to an open universe of any
    /// values with exact literals.
    pub fn structure_or_open(&self, p: &Program) -> Result<Structure, Exit> {
        if self.domain.is_some() {
            return self.structure(p);
        }
        Structure::for_signature(
            &p.signature,
            Domain::open(OpenKind::Any),
            LiteralMode::Exact,
        )
        .map_err(|e| Exit::Usage(e.to_string()))
    }

    pub fn modes(&self) -> Result<ModeDecl, Exit> {
        let path = self
            .modes
            .as_ref()
            .ok_or_else(|| Exit::Usage("no mode file given".into()))?;
        let text = read(path)?;
        parse_modes(&text).map_err(|ds| {
            let file = path.display().to_string();
            Exit::Diagnostics(
                ds.into_iter()
                    .map(|mut d| {
                        d.span = d.span.map(|s| s.with_file(file.clone()));
                        d.to_string()
                    })
                    .collect(),
            )
        })
    }
}
