//! κ arguments on the command line.
//!
//! `+` / `-` set every orbit; otherwise a comma-separated list of `min=±1`
//! (or `coset/min=±1` for the quadratic family). Unlisted orbits are +1.

use std::collections::BTreeMap;

use trigon::singer::OrbitKappa;
use trigon::tripres::Kappa;

fn sign(s: &str) -> Result<i8, String> {
    match s.trim() {
        "1" | "+1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        other => Err(format!("kappa value must be +1 or -1, got `{other}`")),
    }
}

fn entries(spec: &str) -> impl Iterator<Item = Result<(&str, i8), String>> {
    spec.split(',').filter(|e| !e.trim().is_empty()).map(|e| {
        let (k, v) = e.split_once('=').ok_or_else(|| format!("kappa entry `{e}` is not key=±1"))?;
        Ok((k.trim(), sign(v)?))
    })
}

fn number(s: &str) -> Result<usize, String> {
    s.parse().map_err(|_| format!("`{s}` is not a non-negative integer"))
}

/// Parses an orbit κ against the orbit minima `mins`.
pub fn parse_orbit_kappa(spec: &str, mins: &[usize]) -> Result<OrbitKappa, String> {
    if let Ok(s) = sign(spec) {
        return Ok(mins.iter().map(|&m| (m, s)).collect());
    }
    let mut out = BTreeMap::new();
    for e in entries(spec) {
        let (k, v) = e?;
        let m = number(k)?;
        if !mins.contains(&m) {
            return Err(format!("no length-3 orbit has minimum {m}; orbits: {mins:?}"));
        }
        out.insert(m, v);
    }
    Ok(out)
}

/// Parses a coset-indexed κ; `keys` are the admissible (coset rep, orbit min) pairs.
pub fn parse_coset_kappa(spec: &str, keys: &[(usize, usize)]) -> Result<Kappa, String> {
    if let Ok(s) = sign(spec) {
        return Ok(keys.iter().map(|&k| (k, s)).collect());
    }
    let mut out = BTreeMap::new();
    for e in entries(spec) {
        let (k, v) = e?;
        let (c, m) = k.split_once('/').ok_or_else(|| format!("kappa key `{k}` is not coset/min"))?;
        let key = (number(c.trim())?, number(m.trim())?);
        if !keys.contains(&key) {
            return Err(format!("({}, {}) is not a (coset representative, orbit minimum) pair", key.0, key.1));
        }
        out.insert(key, v);
    }
    Ok(out)
}

pub fn orbit_kappa_json(k: &OrbitKappa) -> serde_json::Value {
    k.iter().map(|(m, v)| (m.to_string(), serde_json::json!(v))).collect::<serde_json::Map<_, _>>().into()
}

pub fn coset_kappa_json(k: &Kappa) -> serde_json::Value {
    k.iter().map(|((c, m), v)| (format!("{c}/{m}"), serde_json::json!(v))).collect::<serde_json::Map<_, _>>().into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_specs() {
        let mins = [1, 17];
        assert_eq!(parse_orbit_kappa("-", &mins).unwrap(), OrbitKappa::from([(1, -1), (17, -1)]));
        assert_eq!(parse_orbit_kappa("17=-1", &mins).unwrap(), OrbitKappa::from([(17, -1)]));
        assert!(parse_orbit_kappa("2=-1", &mins).is_err());
        assert!(parse_orbit_kappa("1=0", &mins).is_err());
    }

    #[test]
    fn coset_specs() {
        let keys = [(0, 9), (1, 9), (2, 9)];
        assert_eq!(parse_coset_kappa("2/9=-1", &keys).unwrap(), Kappa::from([((2, 9), -1)]));
        assert!(parse_coset_kappa("3/9=-1", &keys).is_err());
        assert!(parse_coset_kappa("9=-1", &keys).is_err());
    }
}
