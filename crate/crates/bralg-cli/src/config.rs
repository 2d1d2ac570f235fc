//! Declarative algebra configuration: a section-based text format naming the
//! coefficient field, the polynomial ring, the automorphism (with its
//! explicit inverse) and the two defining ideals.
//!
//! ```text
//! [field]
//! kind = cyclotomic 3
//!
//! [ring]
//! vars = z1, z2
//!
//! [sigma]
//! z1 = q*z1
//! z2 = q^2*z2
//!
//! [sigma_inverse]
//! z1 = q^2*z1
//! z2 = q*z2
//!
//! [H]
//! gen = z1 - q^2
//! gen = z2 - q
//!
//! [J]
//! gen = z1 - 1
//! gen = z2 - 1
//! ```
//!
//! Unknown sections and keys are errors; diagnostics carry line numbers.

use bralg::bralgebra::BRAlgebra;
use bralg::polyring::{parse_polynomial, Ideal, PolyError, PolyRing, RingAutomorphism};
use bralg::scalars::FieldSpec;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl fmt::Display) -> ConfigError {
    ConfigError {
        line,
        msg: msg.to_string(),
    }
}

/// Raw parsed form of a configuration, before semantic validation.
#[derive(Debug, Clone)]
pub struct AlgebraConfig {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    /// (variable name, polynomial text, line) as written.
    pub sigma_forward: Vec<(String, String, usize)>,
    pub sigma_backward: Vec<(String, String, usize)>,
    pub h_gens: Vec<(String, usize)>,
    pub j_gens: Vec<(String, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Field,
    Ring,
    Sigma,
    SigmaInverse,
    H,
    J,
}

/// Parses the section text into an [`AlgebraConfig`]. All sections are
/// required except that `[H]` and `[J]` accept any positive number of
/// `gen =` lines.
pub fn parse_config(text: &str) -> Result<AlgebraConfig, ConfigError> {
    let mut field: Option<(FieldSpec, usize)> = None;
    let mut vars: Option<(Vec<String>, usize)> = None;
    let mut sigma_forward = vec![];
    let mut sigma_backward = vec![];
    let mut h_gens = vec![];
    let mut j_gens = vec![];
    let mut seen = vec![];
    let mut section = Section::None;
    for (ln, raw) in text.lines().enumerate() {
        let lineno = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = match name.trim() {
                "field" => Section::Field,
                "ring" => Section::Ring,
                "sigma" => Section::Sigma,
                "sigma_inverse" => Section::SigmaInverse,
                "H" => Section::H,
                "J" => Section::J,
                other => return Err(err(lineno, format!("unknown section [{}]", other))),
            };
            if seen.contains(&section) {
                return Err(err(lineno, format!("duplicate section [{}]", name.trim())));
            }
            seen.push(section);
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(lineno, "expected `key = value`"))?;
        if value.is_empty() {
            return Err(err(lineno, format!("empty value for key `{}`", key)));
        }
        match section {
            Section::None => return Err(err(lineno, "content before any section")),
            Section::Field => match key {
                "kind" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    let spec = match parts.as_slice() {
                        ["rationals"] => FieldSpec::rationals(),
                        ["prime", p] => {
                            let p: u64 = p
                                .parse()
                                .map_err(|_| err(lineno, "prime modulus must be an integer"))?;
                            FieldSpec::prime(p).map_err(|e| err(lineno, e))?
                        }
                        ["cyclotomic", n] => {
                            let n: u64 = n
                                .parse()
                                .map_err(|_| err(lineno, "cyclotomic order must be an integer"))?;
                            FieldSpec::cyclotomic(n).map_err(|e| err(lineno, e))?
                        }
                        _ => {
                            return Err(err(
                                lineno,
                                "kind must be `rationals`, `prime p`, or `cyclotomic n`",
                            ))
                        }
                    };
                    field = Some((spec, lineno));
                }
                other => return Err(err(lineno, format!("unknown key `{}` in [field]", other))),
            },
            Section::Ring => match key {
                "vars" => {
                    let names: Vec<String> = value
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect();
                    if names.is_empty() {
                        return Err(err(lineno, "vars must list at least one variable"));
                    }
                    vars = Some((names, lineno));
                }
                other => return Err(err(lineno, format!("unknown key `{}` in [ring]", other))),
            },
            Section::Sigma => sigma_forward.push((key.to_string(), value.to_string(), lineno)),
            Section::SigmaInverse => {
                sigma_backward.push((key.to_string(), value.to_string(), lineno))
            }
            Section::H => match key {
                "gen" => h_gens.push((value.to_string(), lineno)),
                other => return Err(err(lineno, format!("unknown key `{}` in [H]", other))),
            },
            Section::J => match key {
                "gen" => j_gens.push((value.to_string(), lineno)),
                other => return Err(err(lineno, format!("unknown key `{}` in [J]", other))),
            },
        }
    }
    let (field, _) = field.ok_or_else(|| err(0, "missing [field] section with `kind`"))?;
    let (vars, _) = vars.ok_or_else(|| err(0, "missing [ring] section with `vars`"))?;
    for (required, name) in [
        (Section::Sigma, "[sigma]"),
        (Section::SigmaInverse, "[sigma_inverse]"),
        (Section::H, "[H]"),
        (Section::J, "[J]"),
    ] {
        if !seen.contains(&required) {
            return Err(err(0, format!("missing {} section", name)));
        }
    }
    if h_gens.is_empty() {
        return Err(err(0, "[H] requires at least one `gen =` line"));
    }
    if j_gens.is_empty() {
        return Err(err(0, "[J] requires at least one `gen =` line"));
    }
    Ok(AlgebraConfig {
        field,
        vars,
        sigma_forward,
        sigma_backward,
        h_gens,
        j_gens,
    })
}

impl AlgebraConfig {
    /// Validates the configuration into a live algebra: every variable must
    /// have exactly one image in each sigma section, the two substitutions
    /// must compose to the identity (the error names the variable), and
    /// both ideals must pass the constructor checks.
    pub fn build(&self) -> Result<Arc<BRAlgebra>, ConfigError> {
        let ring =
            PolyRing::new(self.field, &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>())
                .map_err(|e| err(0, e))?;
        let forward = self.images(&ring, &self.sigma_forward, "[sigma]")?;
        let backward = self.images(&ring, &self.sigma_backward, "[sigma_inverse]")?;
        let sigma = RingAutomorphism::new(&ring, forward, backward).map_err(|e| match e {
            PolyError::NotInverse { var } => err(
                0,
                format!(
                    "[sigma] and [sigma_inverse] do not compose to the identity on variable `{}`",
                    var
                ),
            ),
            other => err(0, other),
        })?;
        let h = self.ideal(&ring, &self.h_gens)?;
        let j = self.ideal(&ring, &self.j_gens)?;
        BRAlgebra::new(&ring, sigma, h, j).map_err(|e| err(0, e))
    }

    fn images(
        &self,
        ring: &Arc<PolyRing>,
        entries: &[(String, String, usize)],
        section: &str,
    ) -> Result<Vec<bralg::polyring::Polynomial>, ConfigError> {
        let mut images = vec![None; self.vars.len()];
        for (var, text, line) in entries {
            let idx = self
                .vars
                .iter()
                .position(|v| v == var)
                .ok_or_else(|| err(*line, format!("unknown variable `{}` in {}", var, section)))?;
            if images[idx].is_some() {
                return Err(err(
                    *line,
                    format!("duplicate image for variable `{}` in {}", var, section),
                ));
            }
            images[idx] = Some(parse_polynomial(ring, text).map_err(|e| err(*line, e))?);
        }
        images
            .into_iter()
            .enumerate()
            .map(|(i, img)| {
                img.ok_or_else(|| {
                    err(
                        0,
                        format!("missing image for variable `{}` in {}", self.vars[i], section),
                    )
                })
            })
            .collect()
    }

    fn ideal(
        &self,
        ring: &Arc<PolyRing>,
        gens: &[(String, usize)],
    ) -> Result<Ideal, ConfigError> {
        let polys: Vec<bralg::polyring::Polynomial> = gens
            .iter()
            .map(|(text, line)| parse_polynomial(ring, text).map_err(|e| err(*line, e)))
            .collect::<Result<_, _>>()?;
        Ideal::new(ring, polys).map_err(|e| err(0, e))
    }
}

/// Convenience entry point: parse and build in one step.
pub fn load_algebra(text: &str) -> Result<Arc<BRAlgebra>, ConfigError> {
    parse_config(text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CYCLOTOMIC: &str = "\
[field]
kind = cyclotomic 3

[ring]
vars = z1, z2

[sigma]
z1 = q*z1
z2 = q^2*z2

[sigma_inverse]
z1 = q^2*z1
z2 = q*z2

[H]
gen = z1 - q^2
gen = z2 - q

[J]
gen = z1 - 1
gen = z2 - 1
";

    #[test]
    fn round_trip_config() {
        let algebra = load_algebra(CYCLOTOMIC).unwrap();
        assert_eq!(algebra.ring().vars(), &["z1", "z2"]);
        assert_eq!(algebra.gk_dimension(), Some(3));
    }

    #[test]
    fn missing_inverse_section() {
        let broken = CYCLOTOMIC.replace("[sigma_inverse]", "[sigma_oops]");
        let e = load_algebra(&broken).unwrap_err();
        assert!(e.msg.contains("unknown section"), "{}", e);
        let removed: String = CYCLOTOMIC
            .lines()
            .filter(|l| !l.contains("q^2*z1") && !l.contains("[sigma_inverse]") && !l.contains("q*z2"))
            .collect::<Vec<_>>()
            .join("\n");
        let e = load_algebra(&removed).unwrap_err();
        assert!(e.msg.contains("[sigma_inverse]"), "{}", e);
    }

    #[test]
    fn non_inverse_pair_names_the_variable() {
        let broken = CYCLOTOMIC.replace("z1 = q^2*z1", "z1 = q*z1");
        let e = load_algebra(&broken).unwrap_err();
        assert!(e.msg.contains("`z1`"), "{}", e);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let broken = CYCLOTOMIC.replace("vars = z1, z2", "vars = z1, z2\nextra = 1");
        let e = load_algebra(&broken).unwrap_err();
        assert!(e.msg.contains("unknown key `extra`"), "{}", e);
        assert_eq!(e.line, 6);
    }
}
