use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use seqtag::corpus::{
    parse_remap_rules, parse_slash, parse_tagset, parse_vertical, remap as remap_corpus, split_known_unknown,
    stats as corpus_stats, tokenize_raw, write_slash, write_vertical, Tag, TagInventory, TaggedCorpus, TaggedSentence,
    Token, TokenPos,
};
use seqtag::eval::{
    accuracy_csv, confusion_csv, cross_validate, evaluate, fold_accuracy_csv, grid_csv, grid_search, metrics_text,
    percent, prf_csv, render_confusion, report_text, statistics_csv, CrossValReport,
};
use seqtag::modelfile::ModelFile;
use seqtag::tagger::{train as train_model, Model};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes to `path`, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => write_text(p, text),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
                path: PathBuf::from("<stdout>"),
                source: e,
            }),
            _ => Ok(()),
        },
    }
}

macro_rules! say {
    ($($arg:tt)*) => {
        emit(None, &format!("{}\n", format_args!($($arg)*)))?
    };
}

/// `<path>.manifest`, written next to single-file outputs.
fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest");
    PathBuf::from(name)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .filter(|s| !s.is_empty())
        .unwrap_or("corpus")
        .to_string()
}

fn input_err(path: &Path) -> impl FnOnce(seqtag::Error) -> CliError + '_ {
    move |source| CliError::Input {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_annotated(path: &Path, format: Format) -> CliResult<TaggedCorpus> {
    let text = read_text(path)?;
    match format {
        Format::Vertical => parse_vertical(&text),
        Format::Slash => parse_slash(&text),
        Format::Raw => {
            return Err(CliError::Usage(format!(
                "{}: annotated input must be vertical or slash, not raw",
                path.display()
            )))
        }
    }
    .map_err(input_err(path))
}

fn read_tagset(path: &Path) -> CliResult<TagInventory> {
    parse_tagset(&read_text(path)?, &stem(path)).map_err(input_err(path))
}

/// Reads the annotated corpus under `key`. Its tagset comes from `--tagset`
/// when `use_tagset` is set; otherwise it is inferred and named after the
/// file.
fn read_corpus(config: &RunConfig, key: &str, use_tagset: bool) -> CliResult<TaggedCorpus> {
    let path = config.path(key)?;
    let format = config.format(&path)?;
    let corpus = parse_annotated(&path, format)?;
    let inventory = match use_tagset.then(|| config.opt_path("tagset")).transpose()?.flatten() {
        Some(tagset) => read_tagset(&tagset)?,
        None => corpus.inventory().clone().with_name(stem(&path)),
    };
    TaggedCorpus::new(corpus.sentences().to_vec(), inventory).map_err(input_err(&path))
}

/// Token sequences of unannotated (or annotated, tags ignored) input.
fn read_tokens(text: &str, format: Format) -> seqtag::Result<Vec<Vec<Token>>> {
    match format {
        Format::Raw => Ok(tokenize_raw(text)),
        Format::Vertical => {
            let mut sentences = Vec::new();
            let mut current = Vec::new();
            for line in text.lines() {
                let line = line.trim_end_matches('\r');
                if line.trim().is_empty() {
                    if !current.is_empty() {
                        sentences.push(std::mem::take(&mut current));
                    }
                    continue;
                }
                let word = line.split('\t').next().unwrap_or(line);
                current.push(Token::new(word)?);
            }
            if !current.is_empty() {
                sentences.push(current);
            }
            Ok(sentences)
        }
        Format::Slash => text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|line| {
                line.split_whitespace()
                    .map(|item| match item.rsplit_once('/') {
                        Some((word, tag)) if !word.is_empty() && Tag::new(tag).is_ok() => Token::new(word),
                        _ => Token::new(item),
                    })
                    .collect()
            })
            .collect(),
    }
}

fn annotated_output(config: &RunConfig, input: Format) -> CliResult<Format> {
    let default = if input == Format::Raw { Format::Slash } else { input };
    match config.get("output_format", default)? {
        Format::Raw => Err(CliError::Usage("--output-format must be vertical or slash".into())),
        f => Ok(f),
    }
}

fn render(corpus: &TaggedCorpus, format: Format) -> String {
    match format {
        Format::Slash => write_slash(corpus),
        _ => write_vertical(corpus),
    }
}

fn load_model(path: &Path) -> CliResult<Model> {
    let file = ModelFile::parse(&read_text(path)?).map_err(input_err(path))?;
    Model::from_model_file(&file).map_err(input_err(path))
}

pub fn train(config: &RunConfig) -> CliResult<()> {
    let corpus = read_corpus(config, "in", true)?;
    let settings = config.tagger_settings()?;
    let out = config.path("out")?;
    let start = Instant::now();
    let (model, summary) = train_model(&corpus, &settings)?;
    let elapsed = start.elapsed().as_secs_f64();
    write_text(&out, &model.to_model_file().to_text())?;
    write_text(&sidecar(&out), &config.manifest("train"))?;
    say!("tagger={}", settings.kind);
    say!("sentences={}", corpus.len());
    for line in summary {
        say!("{line}");
    }
    say!("wall_time_s={elapsed:.3}");
    Ok(())
}

pub fn tag(config: &RunConfig) -> CliResult<()> {
    let model = load_model(&config.path("model")?)?;
    let input = config.path("in")?;
    let format = config.format(&input)?;
    let output_format = annotated_output(config, format)?;
    let out = config.opt_path("out")?;
    let sentences = read_tokens(&read_text(&input)?, format).map_err(input_err(&input))?;
    let refs: Vec<&[Token]> = sentences.iter().map(Vec::as_slice).collect();
    let tags = model.tag_all(&refs)?;
    let text = if sentences.is_empty() {
        String::new()
    } else {
        let tagged = sentences
            .into_iter()
            .zip(tags)
            .map(|(tokens, tags)| TaggedSentence::new(tokens, tags))
            .collect::<seqtag::Result<Vec<_>>>()?;
        render(&TaggedCorpus::new(tagged, model.inventory().clone())?, output_format)
    };
    emit(out.as_deref(), &text)?;
    if let Some(out) = &out {
        write_text(&sidecar(out), &config.manifest("tag"))?;
    }
    Ok(())
}

pub fn eval(config: &RunConfig) -> CliResult<()> {
    let gold = read_corpus(config, "in", true)?;
    let pred_path = config.path("pred")?;
    let pred = parse_annotated(&pred_path, config.format(&pred_path)?)?;
    if pred.len() != gold.len() {
        return Err(CliError::Data(format!(
            "{}: {} sentences, gold has {}",
            pred_path.display(),
            pred.len(),
            gold.len()
        )));
    }
    for (i, (g, p)) in gold.sentences().iter().zip(pred.sentences()).enumerate() {
        if g.tokens() != p.tokens() {
            return Err(CliError::Data(format!(
                "{}: sentence {} does not match the gold tokens",
                pred_path.display(),
                i + 1
            )));
        }
    }
    let known: Vec<TokenPos> = match config.opt_path("train")? {
        Some(_) => split_known_unknown(&read_corpus(config, "train", false)?, &gold).known,
        None => gold
            .sentences()
            .iter()
            .enumerate()
            .flat_map(|(s, sent)| (0..sent.len()).map(move |position| TokenPos { sentence: s, position }))
            .collect(),
    };
    let predicted: Vec<Vec<Tag>> = pred.sentences().iter().map(|s| s.tags().to_vec()).collect();
    let report = evaluate(&gold, &predicted, &known)?;
    let top_n = config.get("top_n", 20usize)?;
    let confusion = confusion_csv(&render_confusion(&report, top_n)?);
    match config.opt_path("out")? {
        Some(dir) => {
            create_dir(&dir)?;
            write_text(&dir.join("metrics.txt"), &report_text(&report))?;
            write_text(&dir.join("prf.csv"), &prf_csv(&report))?;
            write_text(&dir.join("confusion.csv"), &confusion)?;
            write_text(&dir.join("manifest.txt"), &config.manifest("eval"))?;
        }
        None => emit(None, &report_text(&report))?,
    }
    say!("overall accuracy: {}%", percent(report.overall_accuracy()));
    Ok(())
}

fn write_crossval(dir: &Path, cv: &CrossValReport, top_n: usize) -> CliResult<()> {
    let best = &cv.best_fold().report;
    let files = [
        ("statistics.csv", statistics_csv(cv)),
        ("accuracy.csv", accuracy_csv(cv)),
        ("fold_accuracy.csv", fold_accuracy_csv(cv)),
        ("prf.csv", prf_csv(best)),
        ("confusion.csv", confusion_csv(&render_confusion(best, top_n)?)),
        ("metrics.txt", metrics_text(cv)),
    ];
    for (name, text) in files {
        write_text(&dir.join(name), &text)?;
    }
    Ok(())
}

fn folds(config: &RunConfig) -> CliResult<usize> {
    let k = config.get("k", 10usize)?;
    if k < 2 {
        return Err(CliError::Usage(format!("--k must be at least 2, got {k}")));
    }
    Ok(k)
}

pub fn crossval(config: &RunConfig) -> CliResult<()> {
    let corpus = read_corpus(config, "in", true)?;
    let settings = config.tagger_settings()?;
    let k = folds(config)?;
    let seed = config.seed()?;
    let top_n = config.get("top_n", 20usize)?;
    let out = config.path("out")?;
    let cv = cross_validate(&corpus, k, seed, &settings)?;
    create_dir(&out)?;
    write_crossval(&out, &cv, top_n)?;
    write_text(&out.join("manifest.txt"), &config.manifest("crossval"))?;
    say!(
        "overall accuracy: {}% (mean over {k} folds; known {}%, unknown {}%)",
        percent(cv.macro_mean.overall),
        percent(cv.macro_mean.known),
        percent(cv.macro_mean.unknown)
    );
    Ok(())
}

pub fn gridsearch(config: &RunConfig) -> CliResult<()> {
    let corpus = read_corpus(config, "in", true)?;
    let (settings, grid) = config.grid_settings()?;
    let k = folds(config)?;
    let seed = config.seed()?;
    let top_n = config.get("top_n", 20usize)?;
    let out = config.path("out")?;
    let result = grid_search(&corpus, k, seed, &settings, &grid)?;
    let best = result.best_row();
    create_dir(&out)?;
    write_text(&out.join("grid.csv"), &grid_csv(&result))?;
    write_text(
        &out.join("best.txt"),
        &format!("c1={}\nc2={}\nscore={:.6}\n", best.c1, best.c2, best.score),
    )?;
    write_crossval(&out, &best.report, top_n)?;
    write_text(&out.join("manifest.txt"), &config.manifest("gridsearch"))?;
    say!(
        "best c1={} c2={}: overall accuracy {}%",
        best.c1,
        best.c2,
        percent(best.report.macro_mean.overall)
    );
    Ok(())
}

pub fn stats(config: &RunConfig) -> CliResult<()> {
    let corpus = read_corpus(config, "in", true)?;
    let out = config.opt_path("out")?;
    emit(out.as_deref(), &corpus_stats(&corpus).to_csv())?;
    if let Some(out) = &out {
        write_text(&sidecar(out), &config.manifest("stats"))?;
    }
    Ok(())
}

pub fn remap(config: &RunConfig) -> CliResult<()> {
    let input = config.path("in")?;
    let corpus = read_corpus(config, "in", false)?;
    let rules_path = config.path("rules")?;
    let rules = parse_remap_rules(&read_text(&rules_path)?).map_err(input_err(&rules_path))?;
    let target = read_tagset(&config.path("tagset")?)?;
    let output_format = annotated_output(config, config.format(&input)?)?;
    let out = config.path("out")?;
    let remapped = remap_corpus(&corpus, &rules, &target)?;
    write_text(&out, &render(&remapped, output_format))?;
    write_text(&sidecar(&out), &config.manifest("remap"))?;
    Ok(())
}

pub fn tokenize(config: &RunConfig) -> CliResult<()> {
    let input = config.path("in")?;
    let out = config.opt_path("out")?;
    let mut text = String::new();
    for sentence in tokenize_raw(&read_text(&input)?) {
        let words: Vec<&str> = sentence.iter().map(Token::as_str).collect();
        text.push_str(&words.join(" "));
        text.push('\n');
    }
    emit(out.as_deref(), &text)?;
    if let Some(out) = &out {
        write_text(&sidecar(out), &config.manifest("tokenize"))?;
    }
    Ok(())
}
