use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;
use std::process::ExitCode;

use aidapub_core::aida::{decode_uri_str, default_ruleset, encode_text, validate, RuleSet};
use aidapub_core::clustering::{
    cluster_corpus, clusters_csv, corpus_from_lines, corpus_from_nanopubs, emit_relation_nanopubs, vectorize,
};
use aidapub_core::extraction::{emit_quality_report, extract_corpus, open_generif, ReportFormat};
use aidapub_core::nanopub::{parse_trig, serialize_trig, serialize_trig_all, Channel, Iri, Provenance};
use aidapub_portal::{ServeConfig, TRIG_MEDIA_TYPE};
use anyhow::{bail, Context, Result};
use chrono::{DateTime, Utc};

use crate::{ClusterArgs, Command, CorpusFormat, ExtractArgs, Stamp};

const EXTRACTOR_AGENT: &str = "urn:x-aidapub:bot:generif-extractor";
const CLUSTERER_AGENT: &str = "urn:x-aidapub:bot:sentence-clusterer";

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Encode { text } => encode(&text),
        Command::Decode { uri } => decode(&uri),
        Command::Validate { rules, input } => validate_lines(rules.as_deref(), input.as_deref()),
        Command::Extract(args) => extract(args),
        Command::Cluster(args) => cluster(args),
        Command::Serve { listen, journal, rules } => serve(ServeConfig { listen, journal, rules: load_rules(rules.as_deref())? }),
        Command::Publish { server, files } => publish(&server, &files),
    }
}

fn load_rules(path: Option<&Path>) -> Result<RuleSet> {
    match path {
        Some(p) => RuleSet::from_path(p).with_context(|| format!("cannot load rules from {}", p.display())),
        None => Ok(default_ruleset()),
    }
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<()> {
    if path.as_os_str() == "-" {
        let mut out = io::stdout().lock();
        out.write_all(bytes)?;
        out.flush()?;
        Ok(())
    } else {
        std::fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
    }
}

impl Stamp {
    fn provenance(&self, default_agent: &str, channel: Channel) -> Result<Provenance> {
        let agent = self.agent.clone().unwrap_or_else(|| Iri::new(default_agent).expect("valid default agent"));
        Ok(Provenance::new(agent, self.time()?, channel))
    }

    fn time(&self) -> Result<DateTime<Utc>> {
        if let Some(t) = self.timestamp {
            return Ok(t);
        }
        match std::env::var("SOURCE_DATE_EPOCH") {
            Ok(s) => {
                let secs: i64 = s.trim().parse().with_context(|| format!("SOURCE_DATE_EPOCH is not an integer: {s:?}"))?;
                DateTime::from_timestamp(secs, 0).context("SOURCE_DATE_EPOCH out of range")
            }
            Err(_) => Ok(Utc::now()),
        }
    }
}

fn encode(text: &str) -> Result<ExitCode> {
    match encode_text(text) {
        Ok(uri) => {
            println!("{uri}");
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => bail!("{}: {e}", e.code()),
    }
}

fn decode(uri: &str) -> Result<ExitCode> {
    match decode_uri_str(uri) {
        Ok(sentence) => {
            println!("{sentence}");
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => bail!("{}: {e}", e.code()),
    }
}

fn tsv_field(s: &str) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s.replace('\\', "\\\\").replace('\t', "\\t")
    }
}

/// Columns: line, verdict, rejected_by, violations, minor_issues, text.
fn validate_lines(rules: Option<&Path>, input: Option<&Path>) -> Result<ExitCode> {
    let rules = load_rules(rules)?;
    let reader: Box<dyn BufRead> = match input {
        Some(p) => Box::new(BufReader::new(
            std::fs::File::open(p).with_context(|| format!("cannot open {}", p.display()))?,
        )),
        None => Box::new(io::stdin().lock()),
    };
    let mut out = io::BufWriter::new(io::stdout().lock());
    writeln!(out, "line\tverdict\trejected_by\tviolations\tminor_issues\ttext")?;
    for (i, line) in reader.lines().enumerate() {
        let line = line.context("cannot read input")?;
        if line.trim().is_empty() {
            continue;
        }
        let report = validate(&line, &rules);
        let violations: Vec<&str> = report.violations.iter().map(|v| v.as_str()).collect();
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            i + 1,
            report.verdict.as_str(),
            tsv_field(report.rejected_by.as_deref().unwrap_or("")),
            tsv_field(&violations.join(",")),
            tsv_field(&report.minor_issues.join("|")),
            tsv_field(&line),
        )?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn extract(args: ExtractArgs) -> Result<ExitCode> {
    let prov = args.stamp.provenance(EXTRACTOR_AGENT, Channel::TextMining)?;
    let rules = load_rules(args.rules.as_deref())?;
    let mut reader = open_generif(&args.input).with_context(|| format!("cannot open {}", args.input.display()))?;
    let (nanopubs, report) = extract_corpus(reader.by_ref(), &rules, &prov);
    for w in reader.warnings() {
        eprintln!("warning: {}: {w}", args.input.display());
    }
    write_output(&args.out, &serialize_trig_all(&nanopubs))?;
    if let Some(path) = &args.report {
        let format = args.report_format.unwrap_or(if path.extension().is_some_and(|e| e == "csv") {
            ReportFormat::Csv
        } else {
            ReportFormat::Text
        });
        write_output(path, &emit_quality_report(&report, format))?;
    }
    eprintln!("{} records, {} nanopublications", report.total, nanopubs.len());
    Ok(ExitCode::SUCCESS)
}

fn cluster(args: ClusterArgs) -> Result<ExitCode> {
    let params = args.params();
    if let Err(e) = params.check() {
        eprintln!("error: {e}");
        return Ok(ExitCode::from(2));
    }
    let prov = args.stamp.provenance(CLUSTERER_AGENT, Channel::Bot)?;
    let format = args.format.unwrap_or(if args.input.extension().is_some_and(|e| e == "trig") {
        CorpusFormat::Trig
    } else {
        CorpusFormat::Lines
    });
    let mut bytes = Vec::new();
    std::fs::File::open(&args.input)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .with_context(|| format!("cannot read {}", args.input.display()))?;
    let sentences = match format {
        CorpusFormat::Trig => {
            let parsed = parse_trig(&bytes).with_context(|| format!("{} is not valid TriG", args.input.display()))?;
            corpus_from_nanopubs(&parsed.nanopubs)
        }
        CorpusFormat::Lines => {
            let text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", args.input.display()))?;
            corpus_from_lines(&text).map_err(|(line, e)| anyhow::anyhow!("{}:{line}: {e}", args.input.display()))?
        }
    };
    let (_, corpus) = vectorize(&sentences)?;
    let clustering = cluster_corpus(&corpus, &params)?;
    if let Some(path) = &args.csv {
        write_output(path, clusters_csv(&clustering, &corpus).as_bytes())?;
    }
    if let Some(path) = &args.out {
        let nanopubs = emit_relation_nanopubs(&clustering.pairs, &prov, &params);
        write_output(path, &serialize_trig_all(&nanopubs))?;
    }
    let isolates = clustering.clusters.iter().filter(|c| c.is_isolate).count();
    eprintln!("{} sentences, {isolates} isolates, {} candidate pairs", corpus.len(), clustering.pairs.len());
    Ok(ExitCode::SUCCESS)
}

fn serve(config: ServeConfig) -> Result<ExitCode> {
    let state = config.open_state().context("cannot open the store")?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(config.listen)
            .await
            .with_context(|| format!("cannot listen on {}", config.listen))?;
        println!("listening on http://{}", listener.local_addr()?);
        io::stdout().flush()?;
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        aidapub_portal::serve(listener, state, shutdown).await?;
        Ok(ExitCode::SUCCESS)
    })
}

/// Prints `uri<TAB>stored_at<TAB>created|existing` per nanopublication.
/// Every file is checked before anything is sent.
fn publish(server: &str, files: &[std::path::PathBuf]) -> Result<ExitCode> {
    let mut nanopubs = Vec::new();
    for path in files {
        let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        let parsed = parse_trig(&bytes).with_context(|| format!("{} is not valid TriG", path.display()))?;
        if parsed.nanopubs.is_empty() {
            bail!("{} holds no nanopublication", path.display());
        }
        nanopubs.extend(parsed.nanopubs);
    }
    let agent: ureq::Agent = ureq::Agent::config_builder().http_status_as_error(false).build().into();
    let url = format!("{}/nanopubs", server.trim_end_matches('/'));
    let mut out = io::stdout().lock();
    for np in &nanopubs {
        let mut resp = agent
            .post(&url)
            .header("Content-Type", TRIG_MEDIA_TYPE)
            .send(&serialize_trig(np)[..])
            .with_context(|| format!("cannot reach {url}"))?;
        let status = resp.status();
        let text = resp.body_mut().read_to_string().context("cannot read response")?;
        if !status.is_success() {
            bail!("{} rejected by server ({status}): {text}", np.uri());
        }
        let receipt: serde_json::Value = serde_json::from_str(&text).context("unexpected response")?;
        let kind = if status.as_u16() == 201 { "created" } else { "existing" };
        writeln!(out, "{}\t{}\t{kind}", receipt["uri"].as_str().unwrap_or(""), receipt["stored_at"].as_str().unwrap_or(""))?;
    }
    Ok(ExitCode::SUCCESS)
}
