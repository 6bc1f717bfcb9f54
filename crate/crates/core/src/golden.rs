//! Embedded golden copies of the three reference tables (connected
//! correlators, structure coefficients, monotone models) for the seventeen
//! profiles with 2 <= |mu| <= 5, used by the regression commands and the
//! acceptance suite.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactalg::rat_from_string;
use crate::{Int, QIntProduct, Rat};

const TABLE1: &str = include_str!("../data/table1.json");
const TABLE2: &str = include_str!("../data/table2.json");
const TABLE3: &str = include_str!("../data/table3.json");

/// A golden connected correlator: a sum of integer multiples of q-integer
/// products (the `[B_total]` denominator already divided out).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorRow {
    pub mu: Vec<u64>,
    pub terms: Vec<QIntProduct>,
}

/// A golden structure-coefficient row: the integers `C(mu, m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientRow {
    pub mu: Vec<u64>,
    pub c: BTreeMap<u64, Int>,
}

/// A golden monotone model `C0 * k + sum C(m) m^k` in the fixed-target
/// normalisation.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneRow {
    pub mu: Vec<u64>,
    pub c0: Rat,
    pub c: BTreeMap<u64, Rat>,
}

fn corrupt(what: &str) -> Error {
    Error::Parse { position: 0, message: format!("corrupt embedded table: {what}") }
}

fn parse_rows(raw: &str) -> Result<Vec<Value>> {
    let v: Value = serde_json::from_str(raw).map_err(|e| corrupt(&e.to_string()))?;
    v.as_array().cloned().ok_or_else(|| corrupt("expected a JSON array"))
}

fn parse_mu(row: &Value) -> Result<Vec<u64>> {
    row["mu"]
        .as_array()
        .map(|xs| xs.iter().filter_map(Value::as_u64).collect())
        .ok_or_else(|| corrupt("missing mu"))
}

fn parse_rat_map(row: &Value, key: &str) -> Result<BTreeMap<u64, Rat>> {
    let obj = row[key].as_object().ok_or_else(|| corrupt("missing coefficient map"))?;
    obj.iter()
        .map(|(m, v)| {
            let m = m.parse::<u64>().map_err(|_| corrupt("non-integer key"))?;
            let v = rat_from_string(v.as_str().ok_or_else(|| corrupt("non-string value"))?)?;
            Ok((m, v))
        })
        .collect()
}

/// The seventeen golden connected correlators.
pub fn table1() -> Result<Vec<CorrelatorRow>> {
    parse_rows(TABLE1)?
        .iter()
        .map(|row| {
            let mu = parse_mu(row)?;
            let terms = row["terms"]
                .as_array()
                .ok_or_else(|| corrupt("missing terms"))?
                .iter()
                .map(|t| {
                    let coeff: Int = t["coeff"]
                        .as_str()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| corrupt("bad coefficient"))?;
                    let factors: Vec<u64> = t["factors"]
                        .as_array()
                        .map(|xs| xs.iter().filter_map(Value::as_u64).collect())
                        .ok_or_else(|| corrupt("bad factors"))?;
                    Ok(QIntProduct::new(coeff, factors))
                })
                .collect::<Result<_>>()?;
            Ok(CorrelatorRow { mu, terms })
        })
        .collect()
}

/// The seventeen golden structure-coefficient rows.
pub fn table2() -> Result<Vec<CoefficientRow>> {
    parse_rows(TABLE2)?
        .iter()
        .map(|row| {
            let mu = parse_mu(row)?;
            let c = parse_rat_map(row, "C")?
                .into_iter()
                .map(|(m, v)| {
                    if !v.is_integer() {
                        return Err(corrupt("non-integer structure coefficient"));
                    }
                    Ok((m, v.to_integer()))
                })
                .collect::<Result<_>>()?;
            Ok(CoefficientRow { mu, c })
        })
        .collect()
}

/// The seventeen golden monotone models (fixed-target normalisation).
pub fn table3() -> Result<Vec<MonotoneRow>> {
    parse_rows(TABLE3)?
        .iter()
        .map(|row| {
            let mu = parse_mu(row)?;
            let c0 = rat_from_string(
                row["C0"].as_str().ok_or_else(|| corrupt("missing C0"))?,
            )?;
            let c = parse_rat_map(row, "C")?;
            Ok(MonotoneRow { mu, c0, c })
        })
        .collect()
}
