//! Shared computational context for the CLI: the rings and models, built
//! once from the configuration and the frozen coefficient data.

use std::sync::Arc;

use tautring::cohom::CohomModel;
use tautring::config::EngineConfig;
use tautring::fano::{FanoRing, FanoSquareRing, RelationCoefficients};
use tautring::grassmann::{self, GrassmannRing};
use tautring::Scalar;

pub struct Engine {
    pub cfg: EngineConfig,
    pub gr: GrassmannRing,
    pub model_f: Arc<CohomModel>,
    pub model_fxf: Arc<CohomModel>,
    pub sq: FanoSquareRing,
}

impl Engine {
    pub fn new(
        cfg: EngineConfig,
        coeffs: Option<RelationCoefficients>,
    ) -> Result<Engine, String> {
        let gr = GrassmannRing::new();
        let numbers = grassmann::fano_intersection_numbers(&gr);
        let model_f =
            CohomModel::fano(&cfg, &numbers.g4).map_err(|e| format!("fourfold model: {e}"))?;
        let model_fxf = CohomModel::fano_square(&cfg, &numbers.g4)
            .map_err(|e| format!("square model: {e}"))?;
        let coeffs = coeffs.unwrap_or_else(RelationCoefficients::builtin);
        let sq = FanoSquareRing::build(&numbers, &coeffs, &cfg.cubic_h4, true)
            .map_err(|e| format!("square presentation: {e}"))?;
        Ok(Engine {
            cfg,
            gr,
            model_f,
            model_fxf,
            sq,
        })
    }

    pub fn fano(&self) -> &FanoRing {
        &self.sq.fano
    }

    pub fn cubic_h4(&self) -> Scalar {
        self.cfg.cubic_h4.clone()
    }
}
