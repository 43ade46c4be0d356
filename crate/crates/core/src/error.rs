use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is outside {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("stereographic projection of the nadir is at infinity")]
    ProjectionAtInfinity,
    #[error("degenerate neutral-point configuration: {0}")]
    DegenerateNeutralPoints(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("E-vector undefined at the horizon (zenith angle {0} deg)")]
    HorizonSingularity(f64),
    #[error("pixel ({x}, {y}) outside the {cols}x{rows} raster")]
    PixelOutOfBounds {
        x: f64,
        y: f64,
        cols: usize,
        rows: usize,
    },
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("given and simulated images share no valid pixel")]
    NoOverlap,
    #[error("degenerate image: {0}")]
    DegenerateImage(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: {msg}", path.display())]
    Format { path: PathBuf, msg: String },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            domain,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad user input (arguments, config files,
    /// parameter ranges) as opposed to failures while running.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::Parameter(_)
                | Error::Config(_)
                | Error::DegenerateNeutralPoints(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
