//! Parsers for the small textual arguments: grids, parameters, tail models.

use std::collections::BTreeMap;

use kk_core::hilbert::{FrequencyGrid, TailModel};

use crate::error::{CliError, CliResult};

/// `MIN:MAX:N`, e.g. `-50:50:4096`.
pub fn parse_grid(text: &str) -> CliResult<FrequencyGrid> {
    let bad = |why: &str| CliError::Usage(format!("invalid grid `{text}` (expected MIN:MAX:N): {why}"));
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let [lo, hi, n] = parts[..] else {
        return Err(bad("need exactly three fields"));
    };
    let lo: f64 = lo.parse().map_err(|_| bad("MIN is not a number"))?;
    let hi: f64 = hi.parse().map_err(|_| bad("MAX is not a number"))?;
    let n: usize = n.parse().map_err(|_| bad("N is not a positive integer"))?;
    FrequencyGrid::new(lo, hi, n).map_err(|e| bad(&e.to_string()))
}

/// Collects repeated `key=value` pairs.
pub fn parse_params(pairs: &[String]) -> CliResult<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for pair in pairs {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("invalid parameter `{pair}` (expected key=value)")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("parameter `{key}`: `{value}` is not a number")))?;
        if out.insert(key.trim().to_string(), value).is_some() {
            return Err(CliError::Usage(format!("parameter `{key}` given twice")));
        }
    }
    Ok(out)
}

/// Tail choice on the command line; `Auto` defers to the data source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailChoice {
    Auto,
    Fixed(TailModel),
}

/// `auto`, `none` or `rational:K`.
pub fn parse_tail(text: &str) -> Result<TailChoice, String> {
    match text.trim() {
        "auto" => Ok(TailChoice::Auto),
        "none" => Ok(TailChoice::Fixed(TailModel::None)),
        other => {
            let order = other
                .strip_prefix("rational:")
                .and_then(|k| k.parse::<u32>().ok())
                .filter(|k| *k >= 1)
                .ok_or_else(|| format!("invalid tail `{other}` (expected auto, none or rational:K with K >= 1)"))?;
            Ok(TailChoice::Fixed(TailModel::Rational(order)))
        }
    }
}

/// Three comma-separated column names: omega, real part, imaginary part.
pub fn parse_columns(text: &str) -> Result<[String; 3], String> {
    let names: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    match <[String; 3]>::try_from(names) {
        Ok(cols) if cols.iter().all(|c| !c.is_empty()) => Ok(cols),
        _ => Err(format!("invalid column mapping `{text}` (expected OMEGA,RE,IM)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grid_examples() {
        let g = parse_grid("-50:50:4096").unwrap();
        assert_eq!((g.omega_min, g.omega_max, g.n_points), (-50.0, 50.0, 4096));
        assert!(parse_grid("a:b").is_err());
        assert!(parse_grid("0:1:15").is_err());
        assert!(parse_grid("1:0:64").is_err());
        assert!(parse_grid("0:1:64:3").is_err());
        assert!(parse_grid("0:1:-64").is_err());
    }

    #[test]
    fn params_and_tails() {
        let p = parse_params(&["alpha=2".into(), " omega0 = 3.5".into()]).unwrap();
        assert_eq!(p["alpha"], 2.0);
        assert_eq!(p["omega0"], 3.5);
        assert!(parse_params(&["alpha".into()]).is_err());
        assert!(parse_params(&["alpha=x".into()]).is_err());
        assert!(parse_params(&["alpha=1".into(), "alpha=2".into()]).is_err());
        assert_eq!(parse_tail("rational:2").unwrap(), TailChoice::Fixed(TailModel::Rational(2)));
        assert_eq!(parse_tail("none").unwrap(), TailChoice::Fixed(TailModel::None));
        assert!(parse_tail("rational:0").is_err());
        assert!(parse_tail("cubic").is_err());
        assert_eq!(parse_columns("w, a ,b").unwrap(), ["w", "a", "b"].map(String::from));
        assert!(parse_columns("w,a").is_err());
    }

    proptest! {
        #[test]
        fn valid_grids_round_trip(lo in -1e3f64..1e3, width in 1e-3f64..1e3, half in 8usize..5000) {
            let n = 2 * half;
            let hi = lo + width;
            let g = parse_grid(&format!("{lo}:{hi}:{n}")).unwrap();
            prop_assert_eq!(g.omega_min, lo);
            prop_assert_eq!(g.omega_max, hi);
            prop_assert_eq!(g.n_points, n);
        }

        #[test]
        fn odd_or_small_counts_are_rejected(n in 0usize..5000) {
            let ok = parse_grid(&format!("-1:1:{n}")).is_ok();
            prop_assert_eq!(ok, n >= 16 && n % 2 == 0);
        }
    }
}
