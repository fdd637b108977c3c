//! Certificate file I/O: versioned JSON, byte-stable for identical inputs.

use crate::forge::{ConstructionCertificate, CERTIFICATE_SCHEMA};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum CertError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed certificate: {0}")]
    Format(#[from] serde_json::Error),
    #[error("unsupported schema version {found}, expected {expected}")]
    Schema { found: u32, expected: u32 },
}

pub fn certificate_to_json(cert: &ConstructionCertificate) -> String {
    let mut out = serde_json::to_string_pretty(cert).expect("certificate serializes");
    out.push('\n');
    out
}

pub fn certificate_from_json(data: &str) -> Result<ConstructionCertificate, CertError> {
    let cert: ConstructionCertificate = serde_json::from_str(data)?;
    if cert.schema != CERTIFICATE_SCHEMA {
        return Err(CertError::Schema { found: cert.schema, expected: CERTIFICATE_SCHEMA });
    }
    Ok(cert)
}

pub fn write_certificate(
    cert: &ConstructionCertificate,
    path: &Path,
) -> Result<(), CertError> {
    std::fs::write(path, certificate_to_json(cert))?;
    Ok(())
}

pub fn read_certificate(path: &Path) -> Result<ConstructionCertificate, CertError> {
    let data = std::fs::read_to_string(path)?;
    certificate_from_json(&data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::{forge, ForgeOptions};

    #[test]
    fn json_round_trip() {
        let cert = forge(0, &ForgeOptions::default()).unwrap();
        let json = certificate_to_json(&cert);
        let back = certificate_from_json(&json).unwrap();
        assert_eq!(cert, back);
        // Byte-stable serialization.
        assert_eq!(json, certificate_to_json(&back));
    }

    #[test]
    fn schema_mismatch_rejected() {
        let cert = forge(0, &ForgeOptions::default()).unwrap();
        let json = certificate_to_json(&cert).replace("\"schema\": 1", "\"schema\": 99");
        assert!(matches!(
            certificate_from_json(&json),
            Err(CertError::Schema { found: 99, .. })
        ));
    }
}
