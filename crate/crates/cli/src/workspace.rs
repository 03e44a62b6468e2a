//! Loading artifacts from disk or from the bundled library.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use phl_core::library;
use phl_core::semantics::{Homomorphism, PartialStructure};
use phl_core::syntax::{parse_theory, Parser, Theory};
use phl_core::translation::{morphism_header, parse_morphism, parse_relative, relative_header, RelativeTheory, TheoryMorphism};

use crate::error::CliError;

/// Theories resolved so far, and the directories searched for `NAME.phl`.
#[derive(Default)]
pub struct Workspace {
    theories: BTreeMap<String, Theory>,
    search: Vec<PathBuf>,
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// The first word of a text format file, skipping blank and comment lines.
pub fn leading_keyword(text: &str) -> Option<&str> {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with("//"))
        .and_then(|l| l.split_whitespace().next())
}

impl Workspace {
    pub fn new() -> Self {
        Workspace::default()
    }

    /// Also look for theories named in headers next to `file`.
    pub fn search_near(&mut self, file: &Path) {
        if let Some(dir) = file.parent() {
            let dir = if dir.as_os_str().is_empty() { Path::new(".") } else { dir };
            if !self.search.iter().any(|d| d == dir) {
                self.search.push(dir.to_path_buf());
            }
        }
    }

    fn remember(&mut self, t: Theory) -> Result<Theory, CliError> {
        match self.theories.get(&t.name) {
            Some(known) if *known != t => Err(CliError::IllFormed(format!("two different theories are named `{}`", t.name))),
            _ => {
                self.theories.insert(t.name.clone(), t.clone());
                Ok(t)
            }
        }
    }

    /// A theory given as a file path, or as the name of a bundled theory.
    pub fn theory(&mut self, spec: &str) -> Result<Theory, CliError> {
        let path = Path::new(spec);
        if path.is_file() {
            self.search_near(path);
            let t = parse_theory(&read(path)?).map_err(|e| CliError::Parse(format!("{spec}: {e}")))?;
            return self.remember(t);
        }
        self.theory_named(spec.strip_suffix(".phl").unwrap_or(spec))
    }

    /// A theory referred to by name from inside another file.
    pub fn theory_named(&mut self, name: &str) -> Result<Theory, CliError> {
        if let Some(t) = self.theories.get(name) {
            return Ok(t.clone());
        }
        for dir in self.search.clone() {
            let candidate = dir.join(format!("{name}.phl"));
            if candidate.is_file() {
                let text = read(&candidate)?;
                if leading_keyword(&text) == Some("theory") {
                    let t = parse_theory(&text).map_err(|e| CliError::Parse(format!("{}: {e}", candidate.display())))?;
                    return self.remember(t);
                }
            }
        }
        match library::theory(name) {
            Some(t) => self.remember(t),
            None => Err(CliError::Usage(format!("no theory file or bundled theory named `{name}`"))),
        }
    }

    pub fn morphism(&mut self, path: &Path) -> Result<TheoryMorphism, CliError> {
        self.search_near(path);
        let text = read(path)?;
        let (_, s, t) = morphism_header(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let source = self.theory_named(&s)?;
        let target = self.theory_named(&t)?;
        parse_morphism(&text, &source, &target).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }

    pub fn relative(&mut self, path: &Path, text: &str) -> Result<RelativeTheory, CliError> {
        self.search_near(path);
        let (_, base) = relative_header(text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let base = self.theory_named(&base)?;
        parse_relative(text, &base).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}

/// All model blocks of a file, and the homomorphisms that follow them.
pub struct ModelFile {
    pub models: Vec<PartialStructure>,
    pub homs: Vec<(String, usize, usize, Homomorphism)>,
}

pub fn parse_model_file(text: &str, theory: &Theory, origin: &str) -> Result<ModelFile, CliError> {
    let wrap = |e: phl_core::syntax::ParseError| CliError::Parse(format!("{origin}: {e}"));
    let mut p = Parser::new(text).map_err(wrap)?;
    let mut models: Vec<PartialStructure> = Vec::new();
    let mut homs = Vec::new();
    while !p.at_eof() {
        if p.at_keyword("hom") {
            let (name, a, b) = p.parse_hom_header().map_err(wrap)?;
            let find = |n: &str| {
                models
                    .iter()
                    .position(|m| m.name == n)
                    .ok_or_else(|| CliError::Parse(format!("{origin}: hom `{name}` refers to unknown model `{n}`")))
            };
            let (i, j) = (find(&a)?, find(&b)?);
            let h = p.parse_hom_body(&models[i], &models[j]).map_err(wrap)?;
            homs.push((name, i, j, h));
        } else {
            let m = p.parse_model_block(theory).map_err(wrap)?;
            if models.iter().any(|n| n.name == m.name) {
                return Err(CliError::IllFormed(format!("{origin}: model `{}` is defined twice", m.name)));
            }
            models.push(m);
        }
    }
    Ok(ModelFile { models, homs })
}
