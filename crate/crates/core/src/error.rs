//! Error types shared across the simulation modules.

/// Errors raised by the simulation math and the engine.
///
/// Engine-level failures wrap the underlying error together with the id of
/// the agent that produced it.
#[derive(Debug, thiserror::Error)]
pub enum SimError {
    /// Target is at or behind the camera plane.
    #[error("DepthNonPositive: camera-frame depth {depth} m is at or behind the camera plane")]
    DepthNonPositive { depth: f64 },

    /// Integrated inverse depth crossed zero: the target crossed the camera plane.
    #[error("DepthCollapse: inverse depth became {x3} 1/m after integration")]
    DepthCollapse { x3: f64 },

    /// A state derivative produced a non-finite value.
    #[error("NonFiniteState: state derivative produced a non-finite value")]
    NonFiniteState,

    /// Belief covariance lost positive-definiteness (sigma-point square root failed).
    #[error("CovarianceNotPD: belief covariance is not positive-definite")]
    CovarianceNotPD,

    /// Estimator asked to produce an estimate with neither a prior belief nor a measurement.
    #[error("EstimatorUninitialized: no prior belief and no measurement available")]
    EstimatorUninitialized,

    /// The damped Gram matrix of the interaction matrix is not invertible.
    #[error("SingularInteraction: L*L^T + eps*I is not invertible (eps = {eps_damp})")]
    SingularInteraction { eps_damp: f64 },

    /// Two agents closer than the coincidence threshold.
    #[error("CoincidentAgents: agents are {distance} m apart (<= {threshold} m)")]
    CoincidentAgents { distance: f64, threshold: f64 },

    /// A UAV sits (numerically) directly above the target; its azimuth is undefined.
    #[error("DegenerateAzimuth: UAV horizontal distance {horizontal_distance} m from target")]
    DegenerateAzimuth { horizontal_distance: f64 },

    /// Error produced while processing one agent of a round.
    #[error("agent {id}: {source}")]
    Agent {
        id: u32,
        #[source]
        source: Box<SimError>,
    },

    /// File output failure.
    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
}

impl SimError {
    /// Attach the offending agent id to an error bubbling out of a round.
    pub fn for_agent(self, id: u32) -> SimError {
        SimError::Agent {
            id,
            source: Box::new(self),
        }
    }
}
