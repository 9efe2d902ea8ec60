use crate::check::Probe;
use crate::error::{GeometryError, Result};
use crate::frame::Frame;
use crate::levi_civita::{Connection, Curvature, RicciMode};
use crate::paracontact::ParacontactStructure;
use crate::tensor::TensorField;

/// A structure together with its eagerly computed connection and curvature.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub structure: ParacontactStructure,
    pub frame: Option<Frame>,
    pub connection: Connection,
    pub weighted: Curvature,
    pub frame_sum: Option<Curvature>,
    pub probe: Probe,
    pub seed: u64,
}

impl Geometry {
    pub fn new(structure: ParacontactStructure, frame: Option<Frame>, seed: u64) -> Result<Geometry> {
        let metric = structure.metric();
        let connection = Connection::levi_civita(metric);
        let riemann = connection.riemann();
        let frame_sum = match &frame {
            Some(f) => Some(Curvature::compute(metric, riemann.clone(), RicciMode::PaperFrameSum, Some(f))?),
            None => None,
        };
        let weighted = Curvature::compute(metric, riemann, RicciMode::WeightedTrace, None)?;
        let probe = Probe::new(structure.chart(), seed);
        Ok(Geometry {
            structure,
            frame,
            connection,
            weighted,
            frame_sum,
            probe,
            seed,
        })
    }

    pub fn curvature(&self, mode: RicciMode) -> Result<&Curvature> {
        match mode {
            RicciMode::WeightedTrace => Ok(&self.weighted),
            RicciMode::PaperFrameSum => self
                .frame_sum
                .as_ref()
                .ok_or_else(|| GeometryError::FrameRequired("the paper_frame_sum Ricci mode".into())),
        }
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn nabla_xi(&self) -> TensorField {
        self.structure.nabla_xi(&self.connection)
    }
}
