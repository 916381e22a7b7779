use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Map, Value};
use thiserror::Error;

use super::{CharacterTable, FusionRecord};
use crate::classfun::ClassFunction;
use crate::cyclo::json::{int_from_json, int_to_json};
use crate::cyclo::Cyclotomic;
use crate::fusion::ParaMap;

#[derive(Debug, Error)]
pub enum TableIoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("table format: {0}")]
    Format(String),
}

fn fmt_err(msg: impl Into<String>) -> TableIoError {
    TableIoError::Format(msg.into())
}

fn uint_to_json(n: &BigUint) -> Value {
    int_to_json(&BigInt::from(n.clone()))
}

fn uint_from_json(v: &Value, what: &str) -> Result<BigUint, TableIoError> {
    int_from_json(v)
        .ok()
        .and_then(|n| n.to_biguint())
        .ok_or_else(|| fmt_err(format!("{what}: expected a nonnegative integer, got {v}")))
}

fn index_list(v: &Value, what: &str) -> Result<Vec<usize>, TableIoError> {
    v.as_array()
        .ok_or_else(|| fmt_err(format!("{what}: expected a list")))?
        .iter()
        .map(|x| {
            x.as_u64()
                .filter(|&k| k >= 1)
                .map(|k| k as usize - 1)
                .ok_or_else(|| fmt_err(format!("{what}: bad class position {x}")))
        })
        .collect()
}

impl CharacterTable {
    pub fn to_json(&self) -> Value {
        let mut pm = Map::new();
        for (p, m) in &self.power_maps {
            pm.insert(p.to_string(), json!(m.iter().map(|x| x + 1).collect::<Vec<_>>()));
        }
        let irr: Vec<Value> = self
            .irreducibles
            .iter()
            .map(|chi| Value::Array(chi.iter().map(Cyclotomic::to_json).collect()))
            .collect();
        let fus: Vec<Value> = self.fusions.iter().map(|f| json!({"sub": f.sub, "map": f.map.to_json()})).collect();
        json!({
            "id": self.id,
            "order": uint_to_json(&self.order),
            "centralizers": self.centralizers.iter().map(uint_to_json).collect::<Vec<_>>(),
            "orders": self.orders,
            "powerMaps": pm,
            "irreducibles": irr,
            "fusions": fus,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, TableIoError> {
        let obj = v.as_object().ok_or_else(|| fmt_err("top level must be an object"))?;
        let get = |k: &str| obj.get(k).ok_or_else(|| fmt_err(format!("missing field {k:?}")));
        let id = get("id")?.as_str().ok_or_else(|| fmt_err("id must be a string"))?.to_string();
        let order = uint_from_json(get("order")?, "order")?;
        let centralizers = get("centralizers")?
            .as_array()
            .ok_or_else(|| fmt_err("centralizers must be a list"))?
            .iter()
            .map(|c| uint_from_json(c, "centralizers"))
            .collect::<Result<Vec<_>, _>>()?;
        let orders = get("orders")?
            .as_array()
            .ok_or_else(|| fmt_err("orders must be a list"))?
            .iter()
            .map(|o| o.as_u64().ok_or_else(|| fmt_err(format!("orders: bad entry {o}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut power_maps = BTreeMap::new();
        if let Some(pm) = obj.get("powerMaps") {
            let pm = pm.as_object().ok_or_else(|| fmt_err("powerMaps must be an object"))?;
            for (k, m) in pm {
                let p: u64 = k.parse().map_err(|_| fmt_err(format!("powerMaps: bad prime {k:?}")))?;
                power_maps.insert(p, index_list(m, "powerMaps")?);
            }
        }
        let mut irreducibles = Vec::new();
        if let Some(irr) = obj.get("irreducibles") {
            for row in irr.as_array().ok_or_else(|| fmt_err("irreducibles must be a list"))? {
                let vals = row
                    .as_array()
                    .ok_or_else(|| fmt_err("each irreducible must be a list"))?
                    .iter()
                    .map(|x| Cyclotomic::from_json(x).map_err(|e| fmt_err(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                irreducibles.push(ClassFunction::new(vals));
            }
        }
        let mut fusions = Vec::new();
        if let Some(fs) = obj.get("fusions") {
            for f in fs.as_array().ok_or_else(|| fmt_err("fusions must be a list"))? {
                let sub = f
                    .get("sub")
                    .and_then(Value::as_str)
                    .ok_or_else(|| fmt_err("fusion without sub"))?
                    .to_string();
                let map = ParaMap::from_json(f.get("map").ok_or_else(|| fmt_err("fusion without map"))?)
                    .map_err(fmt_err)?;
                fusions.push(FusionRecord { sub, map });
            }
        }
        Ok(CharacterTable { id, order, centralizers, orders, power_maps, irreducibles, fusions })
    }

    pub fn from_json_str(s: &str) -> Result<Self, TableIoError> {
        Self::from_json(&serde_json::from_str(s)?)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self, TableIoError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| TableIoError::Read { path: path.display().to_string(), source })?;
        Self::from_json_str(&text)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<(), TableIoError> {
        let path = path.as_ref();
        let text = serde_json::to_string(&self.to_json())?;
        std::fs::write(path, text + "\n")
            .map_err(|source| TableIoError::Write { path: path.display().to_string(), source })
    }
}
