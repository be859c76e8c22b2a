use std::path::PathBuf;

use sdbar::homology::Coeffs;
use sdbar::slideglue::SlidePolicy;
use sdbar::{Error, Signature};

/// Settings shared by the complex-building subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub signature: Signature,
    pub coeffs: Coeffs,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub quotient: bool,
    pub subdivide: bool,
    pub slide_self: bool,
}

impl RunConfig {
    pub fn new(signature: Signature, coeffs: Coeffs, cache_dir: Option<PathBuf>, out: Option<PathBuf>) -> Self {
        RunConfig { signature, coeffs, cache_dir, out, quotient: false, subdivide: false, slide_self: false }
    }

    pub fn quotient(mut self, on: bool) -> Self {
        self.quotient = on;
        self
    }

    pub fn subdivide(mut self, on: bool) -> Self {
        self.subdivide = on;
        self
    }

    pub fn slide_self(mut self, on: bool) -> Self {
        self.slide_self = on;
        self
    }

    pub fn policy(&self) -> SlidePolicy {
        SlidePolicy { slide_self: self.slide_self }
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.signature.check()?;
        self.coeffs.check()?;
        if self.quotient && self.subdivide {
            return Err(Error::Domain("--subdivide applies to the unquotiented complex only".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_settings() {
        let cfg = RunConfig::new(Signature::new(0, 2, 1), Coeffs::Z, None, None);
        assert!(cfg.validate().is_ok());
        assert!(cfg.clone().quotient(true).subdivide(true).validate().is_err());
        assert!(RunConfig::new(Signature::new(0, 1, 1), Coeffs::Z, None, None).validate().is_err());
        assert!(RunConfig::new(Signature::new(0, 2, 1), Coeffs::Fp { p: 4 }, None, None).validate().is_err());
    }
}
