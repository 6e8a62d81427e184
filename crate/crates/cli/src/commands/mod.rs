pub mod fss;
pub mod hypotheses;
pub mod report;
pub mod spectrum;
pub mod verify;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::cache::Cache;
use crate::config::ConfigFile;
use crate::output::{canonical, Envelope, Sink};
use crate::CliError;

pub struct Ctx {
    pub file: ConfigFile,
    pub sink: Sink,
    pub cache: Cache,
}

pub struct Produced<R> {
    pub result: R,
    pub json: String,
    pub key: String,
}

/// Looks the result up in the cache, computing and storing it on a miss.
pub fn cached<C, R>(ctx: &Ctx, command: &str, cfg: &C, content: &str, compute: impl FnOnce() -> Result<R, CliError>) -> Result<Produced<R>, CliError>
where
    C: Serialize,
    R: Serialize + DeserializeOwned,
{
    let key = Cache::key(command, cfg, content);
    if let Some(json) = ctx.cache.get(&key) {
        if let Ok(result) = serde_json::from_str(&json) {
            ctx.sink.note(&format!("{command}: cached result {}", &key[..12]));
            return Ok(Produced { result, json, key });
        }
    }
    let result = compute()?;
    let json = canonical(&result)?;
    if let Err(e) = ctx.cache.put(&key, &json) {
        ctx.sink.note(&format!("warning: could not write cache entry: {e}"));
    }
    Ok(Produced { result, json, key })
}

/// Writes the envelope and text report; returns the pass flag.
pub fn finish<C: Serialize, R>(
    ctx: &Ctx,
    command: &'static str,
    cfg: &C,
    produced: &Produced<R>,
    passed: bool,
    summary: String,
    text: String,
) -> Result<bool, CliError> {
    let env = Envelope {
        command,
        cache_key: &produced.key,
        passed,
        summary,
        config: serde_json::to_value(cfg).map_err(|e| CliError::Internal(e.to_string()))?,
        result: &produced.json,
    };
    ctx.sink.emit(command, &env.render()?, &text)?;
    Ok(passed)
}

pub fn load_model(spec: &str) -> Result<etwist_core::spectral::LieAlgebraModel, CliError> {
    etwist_core::spectral::LieAlgebraModel::load(spec).map_err(|e| CliError::Config(format!("model `{spec}`: {e}")))
}
