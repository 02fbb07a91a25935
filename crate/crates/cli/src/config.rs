use std::path::Path;

use operad_rg::contraction_operad::{QftModel, VertexType};
use operad_rg::graphs::{ColorSignature, Parity};
use operad_rg::{Error, Result};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ParityConfig {
    Boson,
    Fermion,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldConfig {
    name: String,
    parity: ParityConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexTypeConfig {
    /// Coordinate label; `t1`, `t2`, … by position when absent.
    name: Option<String>,
    color: String,
    corolla: Vec<String>,
}

/// The JSON model file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    fields: Vec<FieldConfig>,
    vertex_colors: Vec<String>,
    admissible: Vec<[String; 2]>,
    vertex_types: Vec<VertexTypeConfig>,
    require_1pi: bool,
    forbid_tadpoles: bool,
    #[serde(default = "default_true")]
    close_admissible: bool,
}

fn default_true() -> bool {
    true
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("model config: {e}")))
    }

    pub fn into_model(self) -> Result<QftModel> {
        let fields = self.fields.iter().map(|f| {
            let parity = match f.parity {
                ParityConfig::Boson => Parity::Boson,
                ParityConfig::Fermion => Parity::Fermion,
            };
            (f.name.clone(), parity)
        });
        let sig = ColorSignature::new(self.vertex_colors.iter().cloned(), fields)?;
        let field =
            |name: &str| sig.field_color(name).ok_or_else(|| Error::InvalidModel(format!("unknown field `{name}`")));
        let admissible = self.admissible.iter().map(|[a, b]| Ok((field(a)?, field(b)?))).collect::<Result<Vec<_>>>()?;
        let mut types = Vec::new();
        for (k, t) in self.vertex_types.iter().enumerate() {
            let color = sig
                .vertex_color(&t.color)
                .ok_or_else(|| Error::InvalidModel(format!("unknown vertex color `{}`", t.color)))?;
            let corolla = t.corolla.iter().map(|c| field(c)).collect::<Result<Vec<_>>>()?;
            let name = t.name.clone().unwrap_or_else(|| format!("t{}", k + 1));
            types.push(VertexType::new(name, color, corolla));
        }
        QftModel::new(sig, admissible, types, self.require_1pi, self.forbid_tadpoles, self.close_admissible)
    }
}

pub fn load_model(path: &Path) -> Result<QftModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    ModelConfig::from_json(&text)?.into_model()
}
