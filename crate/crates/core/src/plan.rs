use crate::assignment::{decode, evaluate, AssignmentSolution, ObjectivePair};
use crate::error::Result;
use crate::mopso::{self, MopsoOutcome, MopsoParams, Problem};
use crate::network::{MobilityModel, NetworkConfig};

/// TAL assignment as a swarm problem over `[0, 1]^(2·L·N)`.
pub struct TalProblem<'a> {
    pub config: &'a NetworkConfig,
    pub mobility: &'a MobilityModel,
}

impl<'a> TalProblem<'a> {
    pub fn new(config: &'a NetworkConfig, mobility: &'a MobilityModel) -> Self {
        Self { config, mobility }
    }
}

impl Problem for TalProblem<'_> {
    fn dimension(&self) -> usize {
        2 * self.config.num_lists * self.config.num_cells
    }

    fn evaluate(&self, position: &[f64]) -> Result<ObjectivePair> {
        let sol = decode(position, self.config)?;
        Ok(evaluate(&sol, self.mobility, self.config))
    }
}

#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub mopso: MopsoOutcome,
    pub compromise: AssignmentSolution,
}

impl PlanOutcome {
    pub fn compromise_objectives(&self) -> ObjectivePair {
        self.mopso.compromise_entry().objectives
    }
}

/// Runs the swarm on one network and decodes the best-compromise plan.
pub fn plan(config: &NetworkConfig, mobility: &MobilityModel, params: MopsoParams) -> Result<PlanOutcome> {
    config.check_dimensions()?;
    let problem = TalProblem::new(config, mobility);
    let outcome = mopso::run(&problem, params)?;
    let compromise = decode(&outcome.compromise_entry().position, config)?;
    Ok(PlanOutcome {
        mopso: outcome,
        compromise,
    })
}
