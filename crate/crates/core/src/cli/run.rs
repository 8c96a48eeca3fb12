use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use super::config::{LexiconSource, RunConfig};
use crate::assess::{parse_rainfall_csv, write_intensity_csv, write_overlay_csv, write_topics_csv, OverlayRow};
use crate::clean::{clean_text, StopwordList};
use crate::error::{Error, Result};
use crate::ingest::{filter_records, read_records, ParseMode, ReadStats, TweetRecord};
use crate::lexicon::{builtin_harvey_lexicon, load_lexicon, Lexicon};
use crate::mapper::{write_evidence_csv, Mapper, MappingResult};
use crate::pipeline::{AssessmentReport, Pipeline};

/// Everything a finished `assess` run produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub report: AssessmentReport,
    pub read: ReadStats,
    pub overlay: Option<Vec<OverlayRow>>,
    pub warnings: Vec<String>,
}

fn load_lexicon_source(src: &LexiconSource) -> Result<Lexicon> {
    match src {
        LexiconSource::BuiltinHarvey => Ok(builtin_harvey_lexicon()),
        LexiconSource::File(p) => load_lexicon(p),
    }
}

fn load_stopwords(path: Option<&Path>) -> Result<StopwordList> {
    path.map_or_else(|| Ok(StopwordList::default()), StopwordList::load)
}

fn read_input(cfg: &RunConfig) -> Result<(Vec<TweetRecord>, ReadStats)> {
    let f = File::open(&cfg.input).map_err(|e| Error::io(&cfg.input, e))?;
    read_records(BufReader::new(f), cfg.mode).map_err(|e| Error::in_file(&cfg.input, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_with<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> csv::Result<()>,
{
    let mut w = create(path)?;
    f(&mut w).map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Full pipeline: reads inputs, runs every analysis and writes all reports into `cfg.out`.
pub fn run_assess(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let lexicon = load_lexicon_source(&cfg.lexicon)?;
    let stopwords = load_stopwords(cfg.stopwords.as_deref())?;
    let rainfall = match &cfg.rainfall {
        Some(p) => {
            let f = File::open(p).map_err(|e| Error::io(p, e))?;
            Some(parse_rainfall_csv(BufReader::new(f)).map_err(|e| Error::in_file(p, e))?)
        }
        None => None,
    };
    let (records, read) = read_input(cfg)?;

    let pipeline = Pipeline {
        mapper: Mapper::new(lexicon, cfg.mapping),
        stopwords,
        bbox: cfg.bbox,
        window: cfg.window,
        phases: cfg.phases.clone(),
        top_k: cfg.top_k,
    };
    let report = pipeline.run(&records);

    let mut warnings = Vec::new();
    let overlay = rainfall.map(|r| {
        let (rows, w) = report.overlay(&r);
        warnings.extend(w);
        rows
    });

    let out = &cfg.out;
    let geo_dir = out.join("geo");
    fs::create_dir_all(&geo_dir).map_err(|e| Error::io(&geo_dir, e))?;
    write_with(&out.join("intensity.csv"), |w| write_intensity_csv(w, &report.intensity))?;
    write_with(&out.join("topics.csv"), |w| write_topics_csv(w, &report.topics))?;
    write_with(&out.join("daily.csv"), |w| report.daily.write_csv(w))?;
    write_with(&out.join("highway_daily.csv"), |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["highway", "date", "count"])?;
        for (h, s) in &report.highway_daily {
            for (d, n) in s.iter() {
                c.write_record([h.clone(), d.to_string(), n.to_string()])?;
            }
        }
        c.flush()?;
        Ok(())
    })?;
    if let Some(rows) = &overlay {
        write_with(&out.join("overlay.csv"), |w| write_overlay_csv(w, rows))?;
    }
    write_with(&out.join("evidence.csv"), |w| write_evidence_csv(w, &report.mappings))?;
    for set in &report.geo {
        write_text(&geo_dir.join(set.file_name()), &set.to_geojson())?;
    }

    let outcome = RunOutcome {
        report,
        read,
        overlay,
        warnings,
    };
    write_text(&out.join("summary.md"), &render_summary(cfg, &pipeline, &outcome))?;
    Ok(outcome)
}

/// Ingest, clean and map only; writes `evidence.csv` into `cfg.out`.
pub fn run_map(cfg: &RunConfig) -> Result<(Vec<MappingResult>, ReadStats)> {
    cfg.validate()?;
    let mapper = Mapper::new(load_lexicon_source(&cfg.lexicon)?, cfg.mapping);
    let stopwords = load_stopwords(cfg.stopwords.as_deref())?;
    let (records, read) = read_input(cfg)?;
    let kept = filter_records(&records, &cfg.bbox, &cfg.window);
    let results: Vec<MappingResult> = kept
        .iter()
        .map(|r| mapper.map_tweet(&clean_text(r, &stopwords)))
        .filter(|m| !m.is_empty())
        .collect();
    fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    write_with(&cfg.out.join("evidence.csv"), |w| write_evidence_csv(w, &results))?;
    Ok((results, read))
}

fn render_summary(cfg: &RunConfig, pipeline: &Pipeline, o: &RunOutcome) -> String {
    let mut s = String::new();
    let c = &o.report.counts;
    let _ = writeln!(s, "# Highway impact assessment\n");
    let _ = writeln!(s, "## Parameters\n");
    let _ = writeln!(s, "| parameter | value |\n|---|---|");
    let stop_desc = match &cfg.stopwords {
        Some(p) => format!("{} ({} words)", p.display(), pipeline.stopwords.len()),
        None => format!("builtin ({} words)", pipeline.stopwords.len()),
    };
    let params: [(&str, String); 13] = [
        ("input", cfg.input.display().to_string()),
        ("lexicon", cfg.lexicon.to_string()),
        ("bbox", cfg.bbox.to_string()),
        ("window", format!("{}:{}", cfg.window.start, cfg.window.end)),
        ("utc_offset", cfg.window.offset.to_string()),
        ("phases", cfg.phases.to_spec()),
        ("baseline_phase", cfg.phases.baseline().name.clone()),
        ("adjacency", cfg.mapping.adjacency_window().to_string()),
        ("top_k", cfg.top_k.to_string()),
        ("stopwords", stop_desc),
        (
            "rainfall",
            cfg.rainfall
                .as_ref()
                .map_or("none".into(), |p| p.display().to_string()),
        ),
        ("out", cfg.out.display().to_string()),
        (
            "parse_mode",
            match cfg.mode {
                ParseMode::Lenient => "lenient".into(),
                ParseMode::Strict => "strict".into(),
            },
        ),
    ];
    for (k, v) in params {
        let _ = writeln!(s, "| {k} | {v} |");
    }

    let _ = writeln!(s, "\n## Records\n");
    let _ = writeln!(s, "| stage | count |\n|---|---|");
    let rows: [(&str, u64); 10] = [
        ("lines read", o.read.lines),
        ("blank lines", o.read.blank),
        ("parsed", o.read.parsed),
        ("skipped (unparseable)", o.read.skipped),
        ("outside bbox", c.outside_bbox),
        ("outside window", c.outside_window),
        ("retained", c.retained),
        ("mapped to any highway", c.mapped),
        ("mapped, outside all phases", c.outside_phases),
        ("evidence rows", o.report.mappings.iter().map(|m| m.matches.len() as u64).sum()),
    ];
    for (k, v) in rows {
        let _ = writeln!(s, "| {k} | {v} |");
    }

    let _ = writeln!(s, "\n## Highways\n");
    let phases = cfg.phases.phases();
    let _ = write!(s, "| highway | mapped |");
    for p in phases {
        let _ = write!(s, " {} |", p.name);
    }
    let _ = write!(s, "\n|---|---|");
    for _ in phases {
        let _ = write!(s, "---|");
    }
    s.push('\n');
    for (h, series) in &o.report.highway_daily {
        let _ = write!(s, "| {h} | {} |", series.total());
        for p in phases {
            let _ = write!(s, " {} |", series.sum_range(p.start, p.end));
        }
        s.push('\n');
    }

    if !o.warnings.is_empty() || !o.read.skip_samples.is_empty() {
        let _ = writeln!(s, "\n## Warnings\n");
        for (line, msg) in &o.read.skip_samples {
            let _ = writeln!(s, "- input line {line} skipped: {msg}");
        }
        for w in &o.warnings {
            let _ = writeln!(s, "- {w}");
        }
    }
    s
}
