//! Weighted cooperative spectrum sensing with a multi-beam uniform planar array.

pub mod analytic;
pub mod detect;
pub mod error;
pub mod geometry;
pub mod link;
pub mod linalg;
pub mod montecarlo;
pub mod radiation;
pub mod scenario;
pub mod special;

pub use analytic::{AnalyticDetector, LinkCase, SeriesControl, WevdMode};
pub use detect::{DetectorKind, Hypothesis, SampleBlock, WeightScheme};
pub use error::{Error, Result};
pub use geometry::{ArrayPose, Look, Point3, Trajectory};
pub use link::{FadingConfig, FadingModel, LinkState, WeightSource};
pub use montecarlo::{MobilityPlan, Rates, RocCurve, RocMeta, RocPoint, RocSource, Samples, Variant};
pub use radiation::{ArrayGeometry, Beam, BeamSet, ElementPattern, RadioParams};
pub use scenario::{BeamSpec, Heatmap, Scenario};
