//! Uniform front for the three taggers.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::brill::{train_brill, BrillConfig, BrillModel};
use crate::corpus::{Tag, TagInventory, TaggedCorpus, Token};
use crate::crf::{train_crf, CrfModel, TrainConfig};
use crate::error::{Error, Result};
use crate::features::FeatureConfig;
use crate::modelfile::{fmt_f64, ModelFile};
use crate::tnt::{train_tnt, TntConfig, TntModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TaggerKind {
    Crf,
    Tnt,
    Brill,
}

impl TaggerKind {
    pub fn name(self) -> &'static str {
        match self {
            TaggerKind::Crf => "crf",
            TaggerKind::Tnt => "tnt",
            TaggerKind::Brill => "brill",
        }
    }
}

impl fmt::Display for TaggerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TaggerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "crf" => Ok(TaggerKind::Crf),
            "tnt" => Ok(TaggerKind::Tnt),
            "brill" => Ok(TaggerKind::Brill),
            _ => Err(Error::param(format!("unknown tagger `{s}` (expected crf, tnt or brill)"))),
        }
    }
}

/// Everything needed to train any of the taggers.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggerSettings {
    pub kind: TaggerKind,
    pub features: FeatureConfig,
    pub crf: TrainConfig,
    pub tnt: TntConfig,
    pub brill: BrillConfig,
}

impl TaggerSettings {
    pub fn new(kind: TaggerKind) -> Self {
        Self {
            kind,
            features: FeatureConfig::default(),
            crf: TrainConfig::default(),
            tnt: TntConfig::default(),
            brill: BrillConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Crf(CrfModel),
    Tnt(TntModel),
    Brill(BrillModel),
}

impl Model {
    pub fn kind(&self) -> TaggerKind {
        match self {
            Model::Crf(_) => TaggerKind::Crf,
            Model::Tnt(_) => TaggerKind::Tnt,
            Model::Brill(_) => TaggerKind::Brill,
        }
    }

    pub fn inventory(&self) -> &TagInventory {
        match self {
            Model::Crf(m) => m.inventory(),
            Model::Tnt(m) => m.inventory(),
            Model::Brill(m) => m.inventory(),
        }
    }

    pub fn tag(&self, sentence: &[Token]) -> Result<Vec<Tag>> {
        match self {
            Model::Crf(m) => m.tag(sentence),
            Model::Tnt(m) => m.tag(sentence),
            Model::Brill(m) => m.tag(sentence),
        }
    }

    /// Tags sentences in parallel; output order follows input order.
    pub fn tag_all(&self, sentences: &[&[Token]]) -> Result<Vec<Vec<Tag>>> {
        sentences.par_iter().map(|s| self.tag(s)).collect()
    }

    pub fn tag_corpus(&self, corpus: &TaggedCorpus) -> Result<Vec<Vec<Tag>>> {
        let sentences: Vec<&[Token]> = corpus.sentences().iter().map(|s| s.tokens()).collect();
        self.tag_all(&sentences)
    }

    pub fn to_model_file(&self) -> ModelFile {
        match self {
            Model::Crf(m) => m.to_model_file(),
            Model::Tnt(m) => m.to_model_file(),
            Model::Brill(m) => m.to_model_file(),
        }
    }

    pub fn from_model_file(file: &ModelFile) -> Result<Self> {
        match file.kind() {
            "crf" => CrfModel::from_model_file(file).map(Model::Crf),
            "tnt" => TntModel::from_model_file(file).map(Model::Tnt),
            "brill" => BrillModel::from_model_file(file).map(Model::Brill),
            other => Err(Error::format(format!("unknown model kind `{other}`"))),
        }
    }
}

/// Trains the configured tagger and returns it with `key=value` summary
/// lines.
pub fn train(corpus: &TaggedCorpus, settings: &TaggerSettings) -> Result<(Model, Vec<String>)> {
    match settings.kind {
        TaggerKind::Crf => {
            let (model, trace) = train_crf(corpus, &settings.features, &settings.crf)?;
            let summary = vec![
                format!("iterations={}", trace.iterations.len()),
                format!("final_objective={}", fmt_f64(trace.final_objective())),
                format!("termination={:?}", trace.termination),
            ];
            Ok((Model::Crf(model), summary))
        }
        TaggerKind::Tnt => {
            let model = train_tnt(corpus, &settings.tnt)?;
            let l = model.lambdas();
            let summary = vec![format!("lambdas={} {} {}", fmt_f64(l[0]), fmt_f64(l[1]), fmt_f64(l[2]))];
            Ok((Model::Tnt(model), summary))
        }
        TaggerKind::Brill => {
            let (model, outcome) = train_brill(corpus, &settings.brill)?;
            let summary = vec![
                format!("rules={}", model.rules().len()),
                format!("initial_errors={}", outcome.errors[0]),
                format!("final_errors={}", outcome.errors.last().copied().unwrap_or(0)),
            ];
            Ok((Model::Brill(model), summary))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_vertical;

    #[test]
    fn kinds_parse() {
        for kind in [TaggerKind::Crf, TaggerKind::Tnt, TaggerKind::Brill] {
            assert_eq!(kind.name().parse::<TaggerKind>().unwrap(), kind);
        }
        assert!("hmm".parse::<TaggerKind>().is_err());
    }

    #[test]
    fn every_kind_trains_and_reloads() {
        let c = parse_vertical("the\tD\ndog\tN\nruns\tV\n\na\tD\ncat\tN\nsleeps\tV\n").unwrap();
        for kind in [TaggerKind::Crf, TaggerKind::Tnt, TaggerKind::Brill] {
            let (model, summary) = train(&c, &TaggerSettings::new(kind)).unwrap();
            assert!(!summary.is_empty());
            assert_eq!(model.kind(), kind);
            let text = model.to_model_file().to_text();
            let back = Model::from_model_file(&ModelFile::parse(&text).unwrap()).unwrap();
            assert_eq!(back, model);
            let tagged = back.tag_corpus(&c).unwrap();
            for (s, t) in c.sentences().iter().zip(tagged) {
                assert_eq!(s.tags(), t.as_slice());
            }
        }
    }
}
