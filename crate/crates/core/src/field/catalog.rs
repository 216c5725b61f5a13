//! Built-in fields.

use std::collections::BTreeMap;

use super::{coordinate_names, parse_field, FieldDef, FieldError};

/// Catalog entry names, with `n` standing for the dimension argument.
pub fn catalog_names() -> &'static [&'static str] {
    &[
        "lorenz",
        "saddle2",
        "attractor(n)",
        "repeller(n)",
        "limit_cycle",
        "segment_flow",
        "even_field",
    ]
}

/// Looks up a catalog field and applies parameter overrides.
///
/// Lorenz defaults are `sigma = 10`, `b = 8/3`, `r = 24`.
pub fn catalog(name: &str, overrides: &BTreeMap<String, f64>) -> Result<FieldDef, FieldError> {
    let name = name.trim();
    let (source, n, mut params): (String, usize, BTreeMap<String, f64>) = match name {
        "lorenz" => (
            "sigma*(y-x), r*x-y-x*z, x*y-b*z".into(),
            3,
            [("sigma", 10.0), ("b", 8.0 / 3.0), ("r", 24.0)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        ),
        "saddle2" => ("x, -y".into(), 2, BTreeMap::new()),
        "limit_cycle" => (
            "x*(1-(x^2+y^2))-y, y*(1-(x^2+y^2))+x".into(),
            2,
            BTreeMap::new(),
        ),
        "segment_flow" => ("1-x^2, -y".into(), 2, BTreeMap::new()),
        "even_field" => ("x^2-y^2, 2*x*y".into(), 2, BTreeMap::new()),
        _ => {
            let (kind, n) = dimensioned(name)
                .ok_or_else(|| FieldError::UnknownCatalogEntry(name.to_string()))?;
            let sign = if kind == "attractor" { "-" } else { "" };
            let src = coordinate_names(n)
                .iter()
                .map(|c| format!("{}{}", sign, c))
                .collect::<Vec<_>>()
                .join(", ");
            (src, n, BTreeMap::new())
        }
    };
    for (k, v) in overrides {
        match params.get_mut(k) {
            Some(slot) => *slot = *v,
            None => {
                return Err(FieldError::UnknownOverride {
                    entry: name.to_string(),
                    param: k.clone(),
                })
            }
        }
    }
    parse_field(&source, n, &params)
}

/// Splits `attractor(3)` into `("attractor", 3)`.
fn dimensioned(name: &str) -> Option<(&str, usize)> {
    let open = name.find('(')?;
    let kind = &name[..open];
    if kind != "attractor" && kind != "repeller" {
        return None;
    }
    let inner = name[open + 1..].strip_suffix(')')?;
    let n: usize = inner.trim().parse().ok()?;
    (n > 0).then_some((kind, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorenz_override_keeps_other_defaults() {
        let o: BTreeMap<String, f64> = [("r".to_string(), 28.0)].into_iter().collect();
        let f = catalog("lorenz", &o).unwrap();
        assert_eq!(f.params()["r"], 28.0);
        assert_eq!(f.params()["sigma"], 10.0);
        assert_eq!(f.params()["b"], 8.0 / 3.0);
    }

    #[test]
    fn repeller_is_identity() {
        let f = catalog("repeller(3)", &BTreeMap::new()).unwrap();
        assert_eq!(f.dim(), 3);
        assert_eq!(f.eval(&[1.0, -2.0, 3.0]).unwrap(), vec![1.0, -2.0, 3.0]);
    }

    #[test]
    fn attractor_in_five_dimensions() {
        let f = catalog("attractor(5)", &BTreeMap::new()).unwrap();
        assert_eq!(
            f.eval(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap(),
            vec![-1.0, -2.0, -3.0, -4.0, -5.0]
        );
    }

    #[test]
    fn unknown_names() {
        for bad in [
            "nope",
            "attractor(0)",
            "attractor",
            "saddle(2)",
            "repeller(x)",
        ] {
            assert!(
                matches!(
                    catalog(bad, &BTreeMap::new()),
                    Err(FieldError::UnknownCatalogEntry(_))
                ),
                "{}",
                bad
            );
        }
    }

    #[test]
    fn override_must_name_a_parameter() {
        let o: BTreeMap<String, f64> = [("q".to_string(), 1.0)].into_iter().collect();
        assert!(matches!(
            catalog("lorenz", &o),
            Err(FieldError::UnknownOverride { .. })
        ));
        assert!(matches!(
            catalog("saddle2", &o),
            Err(FieldError::UnknownOverride { .. })
        ));
    }

    #[test]
    fn every_listed_entry_resolves() {
        for name in catalog_names() {
            let concrete = name.replace("(n)", "(2)");
            assert!(catalog(&concrete, &BTreeMap::new()).is_ok(), "{}", concrete);
        }
    }
}
