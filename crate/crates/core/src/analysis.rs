//! Everything derived from one algorithm, computed once.

use crate::algorithm::SlowAlgorithm;
use crate::graph::{AlgGraph, Fingerprint, Quotient};
use crate::serret::{serret_check, SerretOptions, SerretVerdict};
use crate::sync::{sync_check, SyncError, SyncResult};
use crate::transducer::{oriented_transducer, CommutatorTransducers, DefectReport, Transducer};

pub struct Analysis {
    pub algorithm: SlowAlgorithm,
    pub graph: AlgGraph,
    pub quotient: Quotient,
    pub fingerprint: Fingerprint,
    pub defect: DefectReport,
}

impl Analysis {
    pub fn new(algorithm: SlowAlgorithm) -> Analysis {
        let graph = AlgGraph::build(&algorithm);
        let quotient = Quotient::of(&graph);
        let fingerprint = Fingerprint::of(&algorithm, &quotient.schreier);
        let defect = DefectReport::compute(&algorithm, &graph, &quotient);
        Analysis { algorithm, graph, quotient, fingerprint, defect }
    }

    pub fn commutators(&self) -> CommutatorTransducers {
        CommutatorTransducers::build(&self.algorithm, &self.graph, &self.quotient)
    }

    pub fn oriented(&self) -> Transducer {
        oriented_transducer(&self.graph)
    }

    pub fn serret(&self, opts: &SerretOptions) -> SerretVerdict {
        serret_check(&self.algorithm, &self.graph, &self.quotient, opts)
    }

    pub fn sync(&self) -> Result<SyncResult, SyncError> {
        sync_check(&self.oriented())
    }
}
