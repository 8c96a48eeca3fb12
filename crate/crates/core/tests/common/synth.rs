//! Synthetic corpus generator with planted ground truth.
//!
//! Every word unit carries the tokens the cleaner is expected to produce for
//! it, written by hand, so expected mappings and term counts are known
//! without running the library.

use chrono::{DateTime, Duration, NaiveDate, TimeZone, Utc};
use hwyimpact::ingest::{BoundingBox, TweetRecord};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const HIGHWAYS: [&str; 5] = ["I-45", "I-10", "I-69", "I-610", "SHT"];

/// (raw text, expected cleaned tokens)
type Unit = (&'static str, &'static [&'static str]);

/// Mentions that relate a tweet to exactly one highway.
pub fn mentions(highway: &str) -> &'static [Unit] {
    match highway {
        "I-45" => &[
            ("I-45", &["i-45"]),
            ("i45", &["i45"]),
            ("I45", &["i45"]),
            ("45 fwy", &["45", "fwy"]),
            ("45 North Freeway", &["45", "north", "freeway"]),
            ("Gulf Fwy 45", &["gulf", "fwy", "45"]),
            ("45 Gulf Freeway", &["45", "gulf", "freeway"]),
        ],
        "I-10" => &[
            ("I-10", &["i-10"]),
            ("i10", &["i10"]),
            ("10 Katy Fwy", &["10", "katy", "fwy"]),
            ("hwy 10", &["hwy", "10"]),
            ("10 Baytown East Freeway", &["10", "baytown", "east", "freeway"]),
        ],
        "I-69" => &[
            ("I-69", &["i-69"]),
            ("i69", &["i69"]),
            ("69 Eastex Fwy", &["69", "eastex", "fwy"]),
            ("69 SW Freeway", &["69", "sw", "freeway"]),
            ("hwy 69", &["hwy", "69"]),
        ],
        "I-610" => &[
            ("I-610", &["i-610"]),
            ("i610", &["i610"]),
            ("610 West Loop", &["610", "west", "loop"]),
            ("610 loop", &["610", "loop"]),
            ("Loop 610", &["loop", "610"]),
            ("610 S Loop", &["610", "s", "loop"]),
        ],
        "SHT" => &[
            ("Beltway 8", &["beltway", "8"]),
            ("beltway8", &["beltway8"]),
            ("BELT8", &["belt8"]),
            ("Sam Houston Tollway", &["sam", "houston", "tollway"]),
            ("Sam Houston Parkway", &["sam", "houston", "parkway"]),
        ],
        _ => &[],
    }
}

/// Indirect phrases without a neighbouring highway term.
pub const NEGATIVES: &[Unit] = &[
    ("45 songs", &["45", "song"]),
    ("10 minutes", &["10", "minute"]),
    ("69 degrees", &["69", "degree"]),
    ("Sam Houston State", &["sam", "houston", "state"]),
    ("610 followers", &["610", "follower"]),
];

pub const PHASE_NAMES: [&str; 3] = ["pre-peak", "peak", "post-peak"];

pub fn topic_words(phase: usize) -> &'static [Unit] {
    match phase {
        0 => &[
            ("stopped", &["stop"]),
            ("stop", &["stop"]),
            ("Accident", &["accident"]),
            ("accidents", &["accident"]),
            ("delays", &["delay"]),
            ("delay", &["delay"]),
            ("min", &["min"]),
            ("mins", &["min"]),
            ("back", &["back"]),
            ("lanes", &["lane"]),
            ("lane", &["lane"]),
            ("traffic", &["traffic"]),
            ("slow", &["slow"]),
            ("blocked", &["block"]),
        ],
        1 => &[
            ("flooding", &["flood"]),
            ("FLOODED", &["flood"]),
            ("flood", &["flood"]),
            ("water", &["water"]),
            ("High", &["high"]),
            ("lanes", &["lane"]),
            ("closed", &["close"]),
            ("rain", &["rain"]),
            ("rescue", &["rescue"]),
            ("affected", &["affect"]),
            ("inbound", &["inbound"]),
            ("exit", &["exit"]),
        ],
        _ => &[
            ("closed", &["close"]),
            ("Closure", &["closure"]),
            ("flooded", &["flood"]),
            ("westside", &["westside"]),
            ("frontage", &["frontage"]),
            ("debris", &["debris"]),
            ("accident", &["accident"]),
            ("stop", &["stop"]),
            ("reopened", &["reopen"]),
            ("downtown", &["downtown"]),
            ("recovery", &["recovery"]),
        ],
    }
}

pub const FILLERS: &[Unit] = &[
    ("today", &["today"]),
    ("wow", &["wow"]),
    ("storm", &["storm"]),
    ("Harvey", &["harvey"]),
    ("car", &["car"]),
    ("road", &["road"]),
    ("driver", &["driver"]),
    ("update", &["update"]),
    ("report", &["report"]),
    ("please", &["please"]),
    ("careful", &["careful"]),
    ("avoid", &["avoid"]),
    ("area", &["area"]),
    ("crazy", &["crazy"]),
    ("safe", &["safe"]),
    ("everyone", &["everyone"]),
    ("city", &["city"]),
    ("weather", &["weather"]),
    ("tonight", &["tonight"]),
    ("help", &["help"]),
    ("stay", &["stay"]),
    ("home", &["home"]),
];

/// Units that vanish entirely during cleaning.
pub const VANISHING: &[Unit] = &[
    ("on", &[]),
    ("the", &[]),
    ("is", &[]),
    ("at", &[]),
    ("of", &[]),
    ("https://t.co/Ab12xY", &[]),
    ("www.houstontranstar.org", &[]),
    ("!!!", &[]),
    ("\u{1F30A}", &[]),
];

pub const DECORATIONS: &[Unit] = &[
    ("@HoustonTranStar", &["houstontranstar"]),
    ("#HarveyFlood", &["harveyflood"]),
    ("#houstonstrong!", &["houstonstrong"]),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Single,
    Multi,
    Negative,
    Noise,
    OutsideBox,
    OutsideWindow,
}

#[derive(Clone, Debug)]
pub struct SynthRecord {
    pub record: TweetRecord,
    pub kind: Kind,
    /// Related highways in lexicon order.
    pub highways: Vec<&'static str>,
    /// Phase index into `PHASE_NAMES`, `None` for records outside the window.
    pub phase: Option<usize>,
    pub expected_tokens: Vec<String>,
}

impl SynthRecord {
    pub fn retained(&self) -> bool {
        !matches!(self.kind, Kind::OutsideBox | Kind::OutsideWindow)
    }
}

pub struct SynthCorpus {
    pub records: Vec<SynthRecord>,
    /// JSON Lines text including malformed and blank lines.
    pub jsonl: String,
    pub malformed_lines: usize,
}

fn polyline(highway: &str) -> Vec<(f64, f64)> {
    let lex = hwyimpact::lexicon::builtin_harvey_lexicon();
    lex.entry(highway).unwrap().polyline.clone().unwrap()
}

fn near_polyline(rng: &mut StdRng, highway: &str, bbox: &BoundingBox) -> (f64, f64) {
    let line = polyline(highway);
    loop {
        let i = rng.gen_range(0..line.len() - 1);
        let t: f64 = rng.gen();
        let (a, b) = (line[i], line[i + 1]);
        let lat = a.0 + t * (b.0 - a.0) + rng.gen_range(-0.003..0.003);
        let lon = a.1 + t * (b.1 - a.1) + rng.gen_range(-0.003..0.003);
        let (lat, lon) = (round6(lat), round6(lon));
        if bbox.contains(lat, lon) {
            return (lat, lon);
        }
    }
}

fn round6(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

fn in_box(rng: &mut StdRng, bbox: &BoundingBox) -> (f64, f64) {
    (
        round6(rng.gen_range(bbox.lat_min + 0.001..bbox.lat_max - 0.001)),
        round6(rng.gen_range(bbox.lon_min + 0.001..bbox.lon_max - 0.001)),
    )
}

const PHASE_DAYS: [(u32, u32, u32); 3] = [(8, 23, 3), (8, 26, 5), (8, 31, 6)];
const PHASE_WEIGHTS: [f64; 3] = [0.15, 0.55, 0.30];
const HIGHWAY_WEIGHTS: [[f64; 5]; 3] = [
    [0.25, 0.15, 0.15, 0.25, 0.20],
    [0.20, 0.30, 0.10, 0.15, 0.25],
    [0.10, 0.35, 0.10, 0.10, 0.35],
];

fn pick_weighted(rng: &mut StdRng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut x = rng.gen_range(0.0..total);
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return i;
        }
        x -= w;
    }
    weights.len() - 1
}

/// Local timestamp (UTC-5) on a random day of `phase`, returned in UTC.
fn time_in_phase(rng: &mut StdRng, phase: usize) -> DateTime<Utc> {
    let (m, d, days) = PHASE_DAYS[phase];
    let day = NaiveDate::from_ymd_opt(2017, m, d).unwrap() + Duration::days(rng.gen_range(0..days) as i64);
    local_to_utc(day, rng.gen_range(0..86_400))
}

fn local_to_utc(day: NaiveDate, secs: i64) -> DateTime<Utc> {
    let midnight_utc = Utc.from_utc_datetime(&day.and_hms_opt(0, 0, 0).unwrap());
    midnight_utc + Duration::seconds(secs + 5 * 3600)
}

/// Assembles units so that highway mentions and negatives are always
/// separated by at least one surviving token.
fn compose(rng: &mut StdRng, anchors: Vec<Unit>, phase: usize) -> (String, Vec<String>) {
    let mut plain: Vec<Unit> = Vec::new();
    let topics = topic_words(phase);
    for _ in 0..rng.gen_range(2..=5) {
        plain.push(*topics.choose(rng).unwrap());
    }
    for _ in 0..rng.gen_range(0..=3) {
        plain.push(*FILLERS.choose(rng).unwrap());
    }
    plain.shuffle(rng);
    while plain.len() < anchors.len() + 1 {
        plain.push(*FILLERS.choose(rng).unwrap());
    }

    // Interleave: plain[0] anchor0 plain[1] anchor1 ... rest
    let mut units: Vec<Unit> = Vec::new();
    let mut plain_iter = plain.into_iter();
    let lead = rng.gen_bool(0.5);
    if lead {
        units.push(plain_iter.next().unwrap());
    }
    for a in anchors {
        units.push(a);
        units.push(plain_iter.next().unwrap());
    }
    units.extend(plain_iter);

    // Vanishing units and decorations can go anywhere except between an
    // anchor and its separator, which is harmless anyway since they never
    // produce highway terms; they only shift raw positions.
    let mut out: Vec<Unit> = Vec::new();
    for u in units {
        if rng.gen_bool(0.15) {
            out.push(*VANISHING.choose(rng).unwrap());
        }
        out.push(u);
    }
    if rng.gen_bool(0.2) {
        out.push(*DECORATIONS.choose(rng).unwrap());
    }
    if rng.gen_bool(0.3) {
        out.push(("https://t.co/xYz9", &[]));
    }
    let text = out.iter().map(|u| u.0).collect::<Vec<_>>().join(" ");
    let tokens = out
        .iter()
        .flat_map(|u| u.1.iter().map(|s| s.to_string()))
        .collect();
    (text, tokens)
}

pub fn generate(seed: u64, n: usize) -> SynthCorpus {
    let mut rng = StdRng::seed_from_u64(seed);
    let bbox = BoundingBox::HOUSTON;
    let mut drafts: Vec<(DateTime<Utc>, SynthRecord)> = Vec::with_capacity(n);

    for _ in 0..n {
        let roll: f64 = rng.gen();
        let kind = match roll {
            r if r < 0.50 => Kind::Single,
            r if r < 0.55 => Kind::Multi,
            r if r < 0.61 => Kind::Negative,
            r if r < 0.97 => Kind::Noise,
            r if r < 0.985 => Kind::OutsideBox,
            _ => Kind::OutsideWindow,
        };
        let phase = pick_weighted(&mut rng, &PHASE_WEIGHTS);
        let mut anchors: Vec<Unit> = Vec::new();
        let mut highways: Vec<usize> = Vec::new();
        match kind {
            Kind::Single | Kind::OutsideBox | Kind::OutsideWindow => {
                let h = pick_weighted(&mut rng, &HIGHWAY_WEIGHTS[phase]);
                highways.push(h);
                anchors.push(*mentions(HIGHWAYS[h]).choose(&mut rng).unwrap());
            }
            Kind::Multi => {
                let a = pick_weighted(&mut rng, &HIGHWAY_WEIGHTS[phase]);
                let mut b = rng.gen_range(0..5);
                while b == a {
                    b = rng.gen_range(0..5);
                }
                highways.extend([a, b]);
                anchors.push(*mentions(HIGHWAYS[a]).choose(&mut rng).unwrap());
                anchors.push(*mentions(HIGHWAYS[b]).choose(&mut rng).unwrap());
                if rng.gen_bool(0.3) {
                    anchors.push(*NEGATIVES.choose(&mut rng).unwrap());
                }
                anchors.shuffle(&mut rng);
            }
            Kind::Negative => anchors.push(*NEGATIVES.choose(&mut rng).unwrap()),
            Kind::Noise => {}
        }
        highways.sort_unstable();
        let (text, expected_tokens) = compose(&mut rng, anchors, phase);

        let (lat, lon, timestamp, phase_of) = match kind {
            Kind::OutsideBox => {
                let (lat, _) = in_box(&mut rng, &bbox);
                (lat, round6(rng.gen_range(-94.9..-94.5)), time_in_phase(&mut rng, phase), Some(phase))
            }
            Kind::OutsideWindow => {
                let (lat, lon) = near_polyline(&mut rng, HIGHWAYS[highways[0]], &bbox);
                let day = if rng.gen_bool(0.5) {
                    NaiveDate::from_ymd_opt(2017, 8, 22).unwrap()
                } else {
                    NaiveDate::from_ymd_opt(2017, 9, 6).unwrap()
                };
                (lat, lon, local_to_utc(day, rng.gen_range(0..86_400)), None)
            }
            Kind::Single | Kind::Multi => {
                let (lat, lon) = near_polyline(&mut rng, HIGHWAYS[highways[0]], &bbox);
                (lat, lon, time_in_phase(&mut rng, phase), Some(phase))
            }
            Kind::Negative | Kind::Noise => {
                let (lat, lon) = in_box(&mut rng, &bbox);
                (lat, lon, time_in_phase(&mut rng, phase), Some(phase))
            }
        };
        let hw: Vec<&'static str> = match kind {
            Kind::Negative | Kind::Noise => Vec::new(),
            _ => highways.iter().map(|&h| HIGHWAYS[h]).collect(),
        };
        drafts.push((
            timestamp,
            SynthRecord {
                record: TweetRecord {
                    id: String::new(),
                    timestamp,
                    lat,
                    lon,
                    text,
                },
                kind,
                highways: hw,
                phase: phase_of,
                expected_tokens,
            },
        ));
    }

    drafts.sort_by_key(|(t, _)| *t);
    let mut records = Vec::with_capacity(drafts.len());
    for (i, (_, mut r)) in drafts.into_iter().enumerate() {
        r.record.id = format!("t{:06}", i + 1);
        records.push(r);
    }

    let mut lines: Vec<String> = records.iter().map(|r| r.record.to_json_line()).collect();
    let malformed = [
        "not json at all".to_string(),
        r#"{"id":"bad1","lat":29.7,"lon":-95.3,"text":"missing timestamp"}"#.to_string(),
        r#"{"id":"bad2","created_at":"2017-08-27T12:00:00Z","lat":99.5,"lon":-95.3,"text":"bad lat"}"#.to_string(),
    ];
    let stride = (lines.len() / (malformed.len() + 1)).max(1);
    for (k, bad) in malformed.iter().enumerate() {
        lines.insert(((k + 1) * stride).min(lines.len()), bad.clone());
    }
    lines.insert(lines.len() / 2, String::new());
    let mut jsonl = lines.join("\n");
    jsonl.push('\n');

    SynthCorpus {
        records,
        jsonl,
        malformed_lines: malformed.len(),
    }
}

/// Synthetic daily rainfall in inches over the study window.
pub const RAINFALL_CSV: &str = "date,inches
2017-08-23,0.00
2017-08-24,0.00
2017-08-25,0.61
2017-08-26,9.92
2017-08-27,16.07
2017-08-28,8.46
2017-08-29,10.15
2017-08-30,1.54
2017-08-31,0.00
2017-09-01,0.00
2017-09-02,0.00
2017-09-03,0.00
2017-09-04,0.00
2017-09-05,0.00
";
