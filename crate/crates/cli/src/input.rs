//! Parsing of command-line encodings for elements, ideals and field towers.

use std::collections::BTreeMap;
use std::path::Path;

use dioph_core::arith::int::parse_rat;
use dioph_core::catalogue::Catalogue;
use dioph_core::ideal::{parse_coords, FieldExtension, Ideal};
use dioph_core::{Error, Field, NFElement};

use crate::CliError;

pub const ENV_CATALOGUE: &str = "DIOPH_CATALOGUE";

/// Built-ins, then the directory from `--catalogue` or the environment.
pub fn catalogue(dir: Option<&Path>) -> Result<Catalogue, CliError> {
    let mut cat = Catalogue::with_builtins();
    let env = std::env::var_os(ENV_CATALOGUE);
    let dir = dir.map(Path::to_path_buf).or_else(|| env.map(Into::into));
    if let Some(d) = dir {
        if !d.is_dir() {
            return Err(CliError::Usage(format!("catalogue directory {} does not exist", d.display())));
        }
        cat.load_dir(&d)?;
    }
    Ok(cat)
}

pub fn element(f: &Field, s: &str) -> Result<NFElement, CliError> {
    Ok(parse_coords(f, s.trim())?)
}

/// `r1;r2;...` with each row comma-separated coordinates. Rows are read as
/// generators, so HNF rows and arbitrary generating sets both work. A lone
/// integer `n` (no comma) stands for nO.
pub fn ideal(f: &Field, s: &str) -> Result<Ideal, CliError> {
    let s = s.trim();
    if !s.contains(',') && !s.contains(';') {
        let q = parse_rat(s)?;
        if !q.is_integer() {
            return Err(Error::Parse(format!("`{s}` is not an integer")).into());
        }
        return Ok(Ideal::from_int(f, q.to_integer())?);
    }
    let gens = s.split(';').filter(|r| !r.trim().is_empty()).map(|r| element(f, r)).collect::<Result<Vec<_>, _>>()?;
    for g in &gens {
        if !g.is_integral() {
            return Err(Error::NotIntegral(g.ib_strings().join(",")).into());
        }
    }
    Ok(Ideal::from_gens(f, &gens)?)
}

/// K inside L. Without `base` the tower is `default_trivial ? L/L : L/Q`.
/// A base other than Q or L itself needs the image of its generator.
pub fn extension(
    cat: &Catalogue,
    top: &str,
    base: Option<&str>,
    embedding: Option<&str>,
    default_trivial: bool,
) -> Result<FieldExtension, CliError> {
    let l = cat.field(top)?;
    let Some(b) = base else {
        return Ok(if default_trivial { FieldExtension::trivial(&l) } else { FieldExtension::over_q(&l)? });
    };
    let k = cat.field(b)?;
    match embedding {
        Some(e) => Ok(FieldExtension::new(&k, &l, element(&l, e)?)?),
        None if k.same(&l) => Ok(FieldExtension::trivial(&l)),
        None if k.degree() == 1 => Ok(FieldExtension::over_q(&l)?),
        None => Err(CliError::Usage(format!("--embedding is required for base `{b}` inside `{top}`"))),
    }
}

/// `name=coords` pairs for `--bind`, values in the top field.
pub fn bindings(f: &Field, items: &[String]) -> Result<BTreeMap<String, NFElement>, CliError> {
    let mut out = BTreeMap::new();
    for it in items {
        let (k, v) = it.split_once('=').ok_or_else(|| CliError::Usage(format!("--bind expects name=coords, got `{it}`")))?;
        out.insert(k.trim().to_string(), element(f, v)?);
    }
    Ok(out)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let s = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Error::Parse(format!("{}: {e}", path.display())).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_encodings_agree() {
        let cat = Catalogue::with_builtins();
        let g = cat.field("gauss").unwrap();
        let by_int = ideal(&g, "5").unwrap();
        assert_eq!(by_int, ideal(&g, "5,0;0,5").unwrap());
        assert_eq!(by_int.norm(), 25.into());
        // (2, 1 + i) = (1 + i)
        assert_eq!(ideal(&g, "2,0;1,1").unwrap(), ideal(&g, "1,1").unwrap());
        assert!(matches!(ideal(&g, "1/2,0"), Err(CliError::Core(Error::NotIntegral(_)))));
        assert!(matches!(ideal(&g, "1,2,3"), Err(CliError::Core(Error::Parse(_)))));
    }

    #[test]
    fn towers() {
        let cat = Catalogue::with_builtins();
        assert_eq!(extension(&cat, "gauss", None, None, false).unwrap().base().name(), "Q");
        assert_eq!(extension(&cat, "gauss", None, None, true).unwrap().base().name(), "gauss");
        assert!(matches!(extension(&cat, "zeta8", Some("sqrt2"), None, false), Err(CliError::Usage(_))));
        let e = extension(&cat, "zeta8", Some("sqrt2"), Some("0,1,0,-1"), false).unwrap();
        assert_eq!(e.relative_degree(), 2);
    }

    #[test]
    fn bindings_need_an_equals_sign() {
        let g = Catalogue::with_builtins().field("gauss").unwrap();
        assert!(bindings(&g, &["a".into()]).is_err());
        assert_eq!(bindings(&g, &["a=1,-1".into()]).unwrap().len(), 1);
    }
}
