//! Space descriptions on disk: a small JSON format naming the carrier,
//! classical norm, norm rule, and triangle functions, with an optional
//! subspace and with DF/TN files pulled in by path relative to the
//! description. The runner and the bundled example specs speak this
//! format.
//!
//! A finite-dimensional simple space with a marked line:
//!
//! ```json
//! {
//!   "kind": "finite",
//!   "dimension": 3,
//!   "norm": "l2",
//!   "rule": "simple",
//!   "tau": "sup-min",
//!   "tau_star": "inf-dual-min",
//!   "subspace": { "basis": [[1.0, 0.0, 0.0]] }
//! }
//! ```
//!
//! Triangle functions are named `sup-X` or `inf-dual-X` where `X` is
//! `min`, `product`, `lukasiewicz`, or a path to a `TN v1` table. The
//! sequence carrier is `"kind": "c00"` (no dimension, ℓ∞ implied) and
//! admits the one named subspace predicate, `"c00-sum-kernel"`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::distfn::DistFn;
use crate::error::{PnError, Result};
use crate::pnspace::PNSpace;
use crate::quotient::Subspace;
use crate::trifn::{CustomTNorm, TNorm, TriangleFn};
use crate::vector::{NormKind, Vector};

/// A parsed space description: the space itself plus the subspace the
/// file marked, if any.
#[derive(Debug, Clone)]
pub struct SpaceSpec {
    space: PNSpace,
    subspace: Option<Subspace>,
}

impl SpaceSpec {
    pub fn space(&self) -> &PNSpace {
        &self.space
    }

    pub fn subspace(&self) -> Option<&Subspace> {
        self.subspace.as_ref()
    }

    pub fn into_parts(self) -> (PNSpace, Option<Subspace>) {
        (self.space, self.subspace)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: String,
    #[serde(default)]
    dimension: Option<usize>,
    #[serde(default)]
    norm: Option<String>,
    rule: String,
    #[serde(default)]
    f0: Option<String>,
    tau: String,
    tau_star: String,
    #[serde(default)]
    subspace: Option<RawSubspace>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawSubspace {
    /// The named predicate, today only `c00-sum-kernel`.
    Named(String),
    Basis { basis: Vec<Vec<f64>> },
}

/// Reads and validates a space description file. Relative DF/TN paths
/// inside resolve against the file's directory.
pub fn load_space_spec(path: impl AsRef<Path>) -> Result<SpaceSpec> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| annotate_io(e, path))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_space_spec(&text, base)
}

// Keeps the error an io::Error but names the file.
fn annotate_io(e: std::io::Error, path: &Path) -> PnError {
    PnError::Io(std::io::Error::new(
        e.kind(),
        format!("{}: {e}", path.display()),
    ))
}

/// [`load_space_spec`] on in-memory text; `base_dir` anchors relative
/// DF/TN references.
pub fn parse_space_spec(text: &str, base_dir: &Path) -> Result<SpaceSpec> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| PnError::Parse {
        line: e.line().max(1),
        msg: e.to_string(),
    })?;
    let tau = parse_triangle_name(&raw.tau, base_dir)?;
    let tau_star = parse_triangle_name(&raw.tau_star, base_dir)?;

    let space = match raw.kind.as_str() {
        "finite" => {
            let dim = raw.dimension.ok_or_else(|| {
                PnError::Domain("field 'dimension' is required for kind 'finite'".into())
            })?;
            let norm = parse_norm_name(raw.norm.as_deref().ok_or_else(|| {
                PnError::Domain("field 'norm' is required for kind 'finite'".into())
            })?)?;
            match raw.rule.as_str() {
                "simple" => {
                    reject_f0(&raw)?;
                    PNSpace::simple_space(dim, norm, tau, tau_star)?
                }
                "serstnev" => {
                    let f0_path = raw.f0.as_deref().ok_or_else(|| {
                        PnError::Domain("field 'f0' is required for rule 'serstnev'".into())
                    })?;
                    let f0 = load_distfn(&base_dir.join(f0_path))?;
                    PNSpace::serstnev_simple_space(dim, norm, f0, tau, tau_star)?
                }
                "norm-squared" => {
                    reject_f0(&raw)?;
                    PNSpace::squared_norm_space(dim, norm, tau, tau_star)?
                }
                other => {
                    return Err(PnError::Domain(format!(
                        "unknown rule '{other}' (expected simple | serstnev | norm-squared)"
                    )))
                }
            }
        }
        "c00" => {
            if raw.dimension.is_some() {
                return Err(PnError::Domain(
                    "kind 'c00' has no finite dimension; remove the field".into(),
                ));
            }
            if let Some(norm) = raw.norm.as_deref() {
                if norm != "linf" {
                    return Err(PnError::Domain(format!(
                        "kind 'c00' carries the sup norm; 'norm': '{norm}' contradicts it"
                    )));
                }
            }
            if raw.rule != "simple" {
                return Err(PnError::Domain(format!(
                    "kind 'c00' supports only the 'simple' rule, got '{}'",
                    raw.rule
                )));
            }
            reject_f0(&raw)?;
            PNSpace::c00_space(tau, tau_star)?
        }
        other => {
            return Err(PnError::Domain(format!(
                "unknown kind '{other}' (expected finite | c00)"
            )))
        }
    };

    let subspace = match raw.subspace {
        None => None,
        Some(RawSubspace::Named(name)) => {
            if name != "c00-sum-kernel" {
                return Err(PnError::Domain(format!(
                    "unknown subspace predicate '{name}' (expected c00-sum-kernel)"
                )));
            }
            if raw.kind != "c00" {
                return Err(PnError::Domain(
                    "the c00-sum-kernel predicate needs the c00 carrier".into(),
                ));
            }
            Some(Subspace::c00_sum_kernel())
        }
        Some(RawSubspace::Basis { basis }) => {
            let dim = raw.dimension.ok_or_else(|| {
                PnError::Domain("a basis subspace needs the finite carrier".into())
            })?;
            let vectors = basis
                .into_iter()
                .map(Vector::dense)
                .collect::<Result<Vec<_>>>()?;
            Some(Subspace::span(vectors, dim)?)
        }
    };

    Ok(SpaceSpec { space, subspace })
}

fn reject_f0(raw: &RawSpec) -> Result<()> {
    if raw.f0.is_some() {
        return Err(PnError::Domain(format!(
            "field 'f0' only applies to the serstnev rule, not '{}'",
            raw.rule
        )));
    }
    Ok(())
}

/// `l1 | l2 | linf`.
pub fn parse_norm_name(name: &str) -> Result<NormKind> {
    match name {
        "l1" => Ok(NormKind::L1),
        "l2" => Ok(NormKind::L2),
        "linf" => Ok(NormKind::Linf),
        other => Err(PnError::Domain(format!(
            "unknown norm '{other}' (expected l1 | l2 | linf)"
        ))),
    }
}

/// `min | product | lukasiewicz`, or a path to a `TN v1` table relative
/// to `base_dir`. The three built-in names always win over files.
pub fn parse_tnorm_name(name: &str, base_dir: &Path) -> Result<TNorm> {
    match name {
        "min" => Ok(TNorm::Minimum),
        "product" => Ok(TNorm::Product),
        "lukasiewicz" => Ok(TNorm::Lukasiewicz),
        path => {
            let resolved = resolve(base_dir, path);
            let text = fs::read_to_string(&resolved).map_err(|e| {
                PnError::Domain(format!(
                    "t-norm '{path}' is not a built-in name and '{}' is not readable: {e}",
                    resolved.display()
                ))
            })?;
            Ok(TNorm::Custom(CustomTNorm::parse_tn(&text)?))
        }
    }
}

/// `sup-X` or `inf-dual-X` with `X` a t-norm name per
/// [`parse_tnorm_name`].
pub fn parse_triangle_name(name: &str, base_dir: &Path) -> Result<TriangleFn> {
    if let Some(t) = name.strip_prefix("inf-dual-") {
        Ok(TriangleFn::InfConvDual(parse_tnorm_name(t, base_dir)?))
    } else if let Some(t) = name.strip_prefix("sup-") {
        Ok(TriangleFn::SupConv(parse_tnorm_name(t, base_dir)?))
    } else {
        Err(PnError::Domain(format!(
            "triangle function '{name}' must start with 'sup-' or 'inf-dual-'"
        )))
    }
}

/// A subspace from command-line text: the predicate name
/// `c00-sum-kernel`, or semicolon-separated basis vectors with
/// whitespace-separated coordinates, e.g. `"1 0 0; 0 1 0"`.
pub fn parse_subspace_arg(text: &str, space: &PNSpace) -> Result<Subspace> {
    use crate::pnspace::SpaceKind;
    let text = text.trim();
    if text == "c00-sum-kernel" {
        if space.kind() != SpaceKind::C00 {
            return Err(PnError::Domain(
                "the c00-sum-kernel predicate needs the c00 carrier".into(),
            ));
        }
        return Ok(Subspace::c00_sum_kernel());
    }
    let SpaceKind::FiniteDim(dim) = space.kind() else {
        return Err(PnError::Domain(
            "basis subspaces need a finite-dimensional carrier".into(),
        ));
    };
    let vectors = text
        .split(';')
        .map(|chunk| {
            let coords = chunk
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>().map_err(|_| {
                        PnError::Domain(format!("bad coordinate '{tok}' in subspace basis"))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            Vector::dense(coords)
        })
        .collect::<Result<Vec<_>>>()?;
    Subspace::span(vectors, dim)
}

/// Reads a `DF v1` file.
pub fn load_distfn(path: impl AsRef<Path>) -> Result<DistFn> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| annotate_io(e, path))?;
    DistFn::parse_df(&text)
}

fn resolve(base_dir: &Path, path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base_dir.join(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pnspace::{NormRule, ProbNormed, SpaceKind};

    fn parse(text: &str) -> Result<SpaceSpec> {
        parse_space_spec(text, Path::new("."))
    }

    #[test]
    fn finite_simple_space_round_trips_fields() {
        let spec = parse(
            r#"{
                "kind": "finite",
                "dimension": 3,
                "norm": "l2",
                "rule": "simple",
                "tau": "sup-min",
                "tau_star": "inf-dual-min",
                "subspace": { "basis": [[1.0, 0.0, 0.0]] }
            }"#,
        )
        .unwrap();
        assert_eq!(spec.space().kind(), SpaceKind::FiniteDim(3));
        assert_eq!(spec.space().norm_kind(), NormKind::L2);
        assert_eq!(*spec.space().rule(), NormRule::SimpleStep);
        assert_eq!(*spec.space().tau(), TriangleFn::tau_m());
        let w = spec.subspace().unwrap();
        assert!(w.is_span());
        assert_eq!(w.ambient_dim(), Some(3));
    }

    #[test]
    fn c00_spec_takes_the_named_predicate() {
        let spec = parse(
            r#"{
                "kind": "c00",
                "rule": "simple",
                "tau": "sup-min",
                "tau_star": "inf-dual-min",
                "subspace": "c00-sum-kernel"
            }"#,
        )
        .unwrap();
        assert_eq!(spec.space().kind(), SpaceKind::C00);
        assert!(!spec.subspace().unwrap().is_span());
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let missing_dim = parse(
            r#"{"kind": "finite", "norm": "l2", "rule": "simple",
                "tau": "sup-min", "tau_star": "inf-dual-min"}"#,
        )
        .unwrap_err();
        assert!(missing_dim.to_string().contains("dimension"));

        let bad_rule = parse(
            r#"{"kind": "finite", "dimension": 2, "norm": "l2", "rule": "cubed",
                "tau": "sup-min", "tau_star": "inf-dual-min"}"#,
        )
        .unwrap_err();
        assert!(bad_rule.to_string().contains("cubed"));

        let kernel_on_finite = parse(
            r#"{"kind": "finite", "dimension": 2, "norm": "l2", "rule": "simple",
                "tau": "sup-min", "tau_star": "inf-dual-min",
                "subspace": "c00-sum-kernel"}"#,
        )
        .unwrap_err();
        assert!(kernel_on_finite.to_string().contains("c00"));

        let stray_f0 = parse(
            r#"{"kind": "finite", "dimension": 2, "norm": "l2", "rule": "simple",
                "f0": "x.df", "tau": "sup-min", "tau_star": "inf-dual-min"}"#,
        )
        .unwrap_err();
        assert!(stray_f0.to_string().contains("f0"));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse("{\n  \"kind\": \"finite\",\n  oops\n}").unwrap_err();
        match err {
            PnError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn triangle_names_parse_and_reject() {
        let base = Path::new(".");
        assert_eq!(
            parse_triangle_name("sup-min", base).unwrap(),
            TriangleFn::tau_m()
        );
        assert_eq!(
            parse_triangle_name("inf-dual-product", base).unwrap(),
            TriangleFn::InfConvDual(TNorm::Product)
        );
        assert!(parse_triangle_name("min", base).is_err());
        assert!(parse_triangle_name("sup-frobnicate", base).is_err());
    }

    #[test]
    fn subspace_arg_parses_bases_and_the_predicate() {
        let space = PNSpace::simple_space(
            3,
            NormKind::L2,
            TriangleFn::tau_m(),
            TriangleFn::tau_m_star(),
        )
        .unwrap();
        let w = parse_subspace_arg("1 0 0; 0 1 0", &space).unwrap();
        assert_eq!(w.basis().unwrap().len(), 2);
        assert!(parse_subspace_arg("c00-sum-kernel", &space).is_err());
        assert!(parse_subspace_arg("1 0; 0 1 0", &space).is_err());

        let c00 = PNSpace::c00_space(TriangleFn::tau_m(), TriangleFn::tau_m_star()).unwrap();
        assert!(!parse_subspace_arg("c00-sum-kernel", &c00).unwrap().is_span());
    }
}
