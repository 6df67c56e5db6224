use std::path::PathBuf;

use crate::config::ConfigError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot read {path}: {source}")]
    ReadConfig {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] polaron_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("self-test failed: {0}")]
    SelfTest(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use polaron_core::Error as E;
        match self {
            CliError::Config(_) | CliError::ReadConfig { .. } => 2,
            CliError::Core(
                E::InvalidParameter { .. } | E::DimensionCap { .. } | E::NotNormalized { .. } | E::ZeroInitialCoherence,
            ) => 2,
            CliError::Core(E::InvariantViolation { .. }) | CliError::SelfTest(_) => 4,
            CliError::Core(_) | CliError::Io { .. } => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) | CliError::ReadConfig { .. } => "config",
            CliError::Core(polaron_core::Error::InvariantViolation { .. }) | CliError::SelfTest(_) => "invariant",
            CliError::Core(_) if self.exit_code() == 2 => "config",
            CliError::Core(_) => "numerical",
            CliError::Io { .. } => "io",
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> String {
        let (key, location) = match self {
            CliError::Config(e) => (e.key().map(str::to_string), e.location().map(|l| l.to_string())),
            _ => (None, None),
        };
        serde_json::json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
            "key": key,
            "location": location,
        })
        .to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let cfg = CliError::Config(ConfigError::Missing { key: "mode".into() });
        assert_eq!(cfg.exit_code(), 2);
        let inv = CliError::Core(polaron_core::Error::InvariantViolation {
            t: 1.0,
            what: "x".into(),
        });
        assert_eq!(inv.exit_code(), 4);
        let num = CliError::Core(polaron_core::Error::QuadratureDiverged {
            subdivisions: 1,
            estimate: 0.0,
            error: 1.0,
        });
        assert_eq!(num.exit_code(), 3);
    }

    #[test]
    fn record_is_json() {
        let e = CliError::Config(ConfigError::Missing { key: "mode".into() });
        let v: serde_json::Value = serde_json::from_str(&e.record()).unwrap();
        assert_eq!(v["key"], "mode");
        assert_eq!(v["exit_code"], 2);
    }
}
