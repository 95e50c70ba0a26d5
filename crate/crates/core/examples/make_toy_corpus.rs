//! Writes the bundled toy corpus under `data/toy/`.
//!
//! Embeddings are built by hand: source subword `k` is the basis vector `e_k`, and a
//! target subword meant to match source word `w` with similarity `s` is
//! `s·e_w + sqrt(1 − s²)·e_u`, where `e_u` is a direction owned by that target subword
//! alone. Its cosine with the first subword of `w` is therefore `s` and with every other
//! source subword 0. Target subwords without a partner get their own direction only.
//!
//! Run with `cargo run -p synchro-core --example make_toy_corpus -- data/toy`.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use synchro_core::ingest::{write_embeddings, write_gold, write_pharaoh, write_segments, SubwordSpan};
use synchro_core::{AlignmentSet, EmbeddingMatrix, GoldAlignment, Provenance, Segment, SegmentEmbeddings, Side, Word};

/// Pairs at or above this similarity are proposed by the external aligner.
const TRUE_LINK: f64 = 0.70;
/// Gold sure links: confident pairs, function words included.
const SURE_LINK: f64 = 0.75;
/// Gold possible links.
const POSSIBLE_LINK: f64 = 0.60;

struct ToySegment {
    id: &'static str,
    /// `surface|POS|f-or-c[|subwords]`, POS `_` for untagged.
    source: &'static str,
    /// `surface|links`, one comma-separated entry per subword: `word:sim` or `-`.
    target: &'static str,
    /// Leading source subwords owned by no word.
    source_gap: usize,
    /// Extra (source, target) pairs the external aligner proposes.
    external_extra: &'static [(usize, usize)],
    /// True pairs the external aligner misses.
    external_missing: &'static [(usize, usize)],
    mqm: f64,
}

const CORPUS: &[ToySegment] = &[
    ToySegment {
        id: "s01",
        source: "I|_|c ate|_|c apples|_|c yesterday|_|c|2",
        target: "私は|0:0.88,0:0.74 昨日|3:0.83 りんごを|2:0.91,2:0.72 食べました|1:0.86,1:0.75",
        source_gap: 0,
        external_extra: &[],
        external_missing: &[],
        mqm: 10.0,
    },
    ToySegment {
        id: "s02",
        source: "I|PRON|f learned|VERB|c new|ADJ|c characters|NOUN|c|2 every|DET|f day|NOUN|c during|ADP|f \
                 the|DET|f course|NOUN|c of|ADP|f the|DET|f next|ADJ|c 15|NUM|c years|NOUN|c .|PUNCT|f",
        target: "それから|11:0.55 15年|12:0.84,13:0.80 毎年|5:0.73 ずっと|4:0.62 新しい|2:0.87 文字を|3:0.90,3:0.50 \
                 学んで|1:0.85 きました|1:0.65",
        source_gap: 0,
        external_extra: &[],
        external_missing: &[],
        mqm: 35.0,
    },
    ToySegment {
        id: "s03",
        source: LONG_SOURCE,
        target: "数学者は|1:0.90,1:0.60 この様な|9:0.55 メッセージを|7:0.86 遺伝子|10:0.82 コードで|11:0.88,32:0.58 \
                 作って|6:0.76 来たんです|2:0.64 けども|16:0.66 しかし|16:0.68 数学者は|22:0.81,22:0.57 \
                 生物学者では|25:0.87,25:0.61 ありません|24:0.65 そして|23:0.67 間違ってる|-,- 物も|- ある訳です|-,- \
                 新しい|46:0.84 タンパク質を|47:0.90,47:0.55 合成して|49:0.80,49:0.52 しまう訳です|-,-",
        source_gap: 0,
        external_extra: &[(29, 5)],
        external_missing: &[(6, 5)],
        mqm: 40.0,
    },
    ToySegment {
        id: "s04",
        source: LONG_SOURCE,
        target: "長い|14:0.83 間|15:0.77 遺伝子|10:0.85 コードに|11:0.86 メッセージを|7:0.88 書き込む|6:0.79 仕事は|- \
                 数学者が|1:0.90,1:0.62 行って|4:0.60 きました|2:0.64 数学者は|22:0.85 生物学者では|25:0.88,25:0.60 \
                 ありません|24:0.66 数学者が|37:0.83 作成した|38:0.80 コードを|34:0.87 使って|32:0.60 \
                 長い|30:0.82 メッセージを|31:0.86 書いた|29:0.84 とすると|27:0.62 未知の|51:0.85 機能を|52:0.88 \
                 持った|50:0.50 新しい|46:0.86 タンパク質の|47:0.89 合成に|49:0.81 つながる|44:0.78 ことでしょう|43:0.66,40:0.55",
        source_gap: 0,
        external_extra: &[],
        external_missing: &[],
        mqm: 12.0,
    },
    ToySegment {
        id: "s05",
        source: "And|CCONJ|f in|ADP|f the|DET|f case|NOUN|c of|ADP|f drugs|NOUN|c in|ADP|f order|NOUN|c to|PART|f \
                 undermine|VERB|c|2 this|DET|f fear|NOUN|c and|CCONJ|f prejudice|NOUN|c|2 that|PRON|f surrounds|VERB|c \
                 the|DET|f issue|NOUN|c we|PRON|f managed|VERB|c to|PART|f gather|VERB|c and|CCONJ|f present|VERB|c \
                 data|NOUN|c that|PRON|f shows|VERB|c that|SCONJ|f today|NOUN|c 's|PART|f drug|NOUN|c policies|NOUN|c \
                 cause|VERB|c much|ADV|f more|ADJ|f harm|NOUN|c than|ADP|f drug|NOUN|c use|NOUN|c per|ADP|f se|X|c \
                 and|CCONJ|f people|NOUN|c are|AUX|f starting|VERB|c to|PART|f get|VERB|f it|PRON|f .|PUNCT|f",
        target: "ドラッグに|5:0.86,4:0.61 関して|1:0.62 恐怖|11:0.84 であったり|12:0.60 偏見を|13:0.85,13:0.55 \
                 なくして行く為に|9:0.64,8:0.58,20:0.50 データを|24:0.89 見せて行く|26:0.69,45:0.50 今の|28:0.80 \
                 政策の|31:0.83 方が|36:0.55 ドラッグよりも|30:0.83,36:0.58 どんどん|33:0.60 悪い|35:0.78 \
                 結果に|35:0.68 なっている|32:0.76 そして|41:0.66 それが|47:0.63 人々には|42:0.87,43:0.52 \
                 分かり|46:0.66 始めました|44:0.79",
        source_gap: 0,
        external_extra: &[],
        external_missing: &[],
        mqm: 20.0,
    },
    ToySegment {
        id: "s06",
        source: "Each|DET|f and|CCONJ|f every|DET|f one|NUM|f of|ADP|f us|PRON|f has|VERB|f the|DET|f power|NOUN|c \
                 to|PART|f change|VERB|c the|DET|f world|NOUN|c .|PUNCT|f",
        target: "私達|5:0.80 一人一人は|0:0.75,2:0.72 世界を|12:0.88 変える|10:0.84 力を|8:0.66 持っているのです|6:0.70,13:0.50",
        source_gap: 0,
        external_extra: &[],
        external_missing: &[],
        mqm: 0.0,
    },
    ToySegment {
        id: "s07",
        source: "And|CCONJ|f if|SCONJ|f we|PRON|f are|AUX|f to|PART|f have|VERB|f a|DET|f union|NOUN|c that|PRON|f \
                 would|AUX|f be|AUX|f stable|ADJ|c and|CCONJ|f that|PRON|f would|AUX|f be|AUX|f at|ADP|f peace|NOUN|c \
                 because|SCONJ|f all|DET|f the|DET|f peoples|NOUN|c accept|VERB|c that|SCONJ|f it|PRON|f is|AUX|f \
                 a|DET|f union|NOUN|c that|PRON|f will|AUX|f guarantee|VERB|c|2 their|PRON|f security|NOUN|c \
                 then|ADV|f we|PRON|f will|AUX|f have|VERB|f to|PART|f amend|VERB|c the|DET|f constitution|NOUN|c|2 \
                 and|CCONJ|f we|PRON|f have|VERB|f to|PART|f work|VERB|c towards|ADP|f it|PRON|f .|PUNCT|f",
        target: "我々は|2:0.77 作りたい|5:0.60 国が|7:0.84,27:0.78 安定して|11:0.86,17:0.74 そして|12:0.70 \
                 すべての|19:0.80 国民が|21:0.88,21:0.50 彼らの|31:0.72 違う|- 安全を|32:0.69 保障して|30:0.69,29:0.55 \
                 くれると|- 信じて|22:0.66 くれれば|- それならば|33:0.71 憲法を|40:0.90 改正できる|38:0.85,35:0.60 \
                 と|- 思っております|-,-",
        source_gap: 0,
        external_extra: &[],
        external_missing: &[],
        mqm: 79.8,
    },
    ToySegment {
        id: "s08",
        source: "Thank|VERB|c you|PRON|f very|ADV|f much|ADV|f .|PUNCT|f",
        target: "ありがとう|0:0.65,0:0.55 ございました|1:0.52,4:0.40",
        source_gap: 0,
        external_extra: &[],
        external_missing: &[],
        mqm: 50.0,
    },
    ToySegment {
        id: "s09",
        source: "The|DET|f committee|NOUN|c|2 approved|VERB|c the|DET|f budget|NOUN|c yesterday|NOUN|c|2 .|PUNCT|f",
        target: "昨日|5:0.86 委員会は|1:0.89,1:0.58 予算を|4:0.87 承認しました|2:0.82,2:0.57",
        source_gap: 0,
        external_extra: &[],
        external_missing: &[],
        mqm: 25.0,
    },
    ToySegment {
        id: "s10",
        source: "Please|INTJ|c look|VERB|c at|ADP|f this|DET|f slide|NOUN|c .|PUNCT|f",
        target: "こちらを|3:0.72 ご覧|1:0.80 ください|0:0.64",
        source_gap: 0,
        external_extra: &[],
        external_missing: &[],
        mqm: 5.0,
    },
    ToySegment {
        id: "s11",
        source: "We|PRON|f need|VERB|c to|PART|f reduce|VERB|c carbon|NOUN|c emissions|NOUN|c|2 by|ADP|f half|NOUN|c \
                 before|ADP|f 2030|NUM|c .|PUNCT|f",
        target: "2030年までに|9:0.90,8:0.70,6:0.60 炭素|4:0.88 排出を|5:0.85 半分に|7:0.86 削減する|3:0.80 \
                 必要が|1:0.82 あります|-",
        source_gap: 0,
        external_extra: &[(6, 4)],
        external_missing: &[],
        mqm: 60.0,
    },
    ToySegment {
        id: "s12",
        source: "We|PRON|f need|VERB|c to|PART|f reduce|VERB|c carbon|NOUN|c emissions|NOUN|c|2 by|ADP|f half|NOUN|c \
                 before|ADP|f 2030|NUM|c .|PUNCT|f",
        target: "我々は|0:0.76 必要です|1:0.83 削減を|3:0.81 炭素|4:0.87 排出の|5:0.84 半分まで|7:0.85,6:0.62 \
                 2030年までに|9:0.89,8:0.72",
        source_gap: 1,
        external_extra: &[],
        external_missing: &[],
        mqm: 15.0,
    },
];

const LONG_SOURCE: &str = "Now|ADV|f mathematicians|NOUN|c|3 have|AUX|f been|AUX|f hiding|VERB|c and|CCONJ|f \
    writing|VERB|c messages|NOUN|c in|ADP|f the|DET|f genetic|ADJ|c code|NOUN|c for|ADP|f a|DET|f long|ADJ|c \
    time|NOUN|c but|CCONJ|f it|PRON|f 's|AUX|f clear|ADJ|c they|PRON|f were|AUX|f mathematicians|NOUN|c|3 \
    and|CCONJ|f not|PART|f biologists|NOUN|c|2 because|SCONJ|f if|SCONJ|f you|PRON|f write|VERB|c long|ADJ|c \
    messages|NOUN|c with|ADP|f the|DET|f code|NOUN|c that|PRON|f the|DET|f mathematicians|NOUN|c|3 \
    developed|VERB|c it|PRON|f would|AUX|f more|ADV|f than|ADP|f likely|ADV|c lead|VERB|c to|ADP|f new|ADJ|c \
    proteins|NOUN|c|2 being|AUX|f synthesized|VERB|c|2 with|ADP|f unknown|ADJ|c functions|NOUN|c .|PUNCT|f";

struct Built {
    segment: Segment,
    /// Per target subword: (target word, optional (source word, similarity)).
    subword_links: Vec<(usize, Option<(usize, f64)>)>,
}

fn build(toy: &ToySegment) -> Built {
    let mut source = Vec::new();
    let mut next = toy.source_gap;
    for token in toy.source.split_whitespace() {
        let parts: Vec<&str> = token.split('|').collect();
        let (surface, pos, flag) = (parts[0], parts[1], parts[2]);
        let subwords: usize = parts.get(3).map_or(1, |n| n.parse().expect("subword count"));
        let pos = (pos != "_").then_some(pos);
        source.push(Word::new(
            surface,
            pos,
            flag == "f",
            SubwordSpan::new(next, next + subwords),
        ));
        next += subwords;
    }
    let mut target = Vec::new();
    let mut subword_links = Vec::new();
    let mut next = 0;
    for (index, token) in toy.target.split_whitespace().enumerate() {
        let (surface, links) = token.split_once('|').expect("target token");
        let links: Vec<&str> = links.split(',').collect();
        for link in &links {
            let parsed = (*link != "-").then(|| {
                let (w, s) = link.split_once(':').expect("word:sim");
                (
                    w.parse::<usize>().expect("word index"),
                    s.parse::<f64>().expect("similarity"),
                )
            });
            if let Some((w, _)) = parsed {
                assert!(w < source.len(), "{}: source word {w} out of range", toy.id);
            }
            subword_links.push((index, parsed));
        }
        target.push(Word::new(
            surface,
            None,
            false,
            SubwordSpan::new(next, next + links.len()),
        ));
        next += links.len();
    }
    let segment = Segment {
        id: toy.id.into(),
        source,
        target,
    };
    segment.validate().expect("toy segment is valid");
    Built { segment, subword_links }
}

fn embeddings(built: &Built, dim: usize) -> SegmentEmbeddings {
    let seg = &built.segment;
    let n_source = seg.subword_count(Side::Source);
    let basis = |k: usize| {
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        v
    };
    let source: Vec<Vec<f64>> = (0..n_source).map(basis).collect();
    let target: Vec<Vec<f64>> = built
        .subword_links
        .iter()
        .enumerate()
        .map(|(j, &(_, link))| {
            let own = n_source + j;
            match link {
                Some((word, sim)) => {
                    let mut v = vec![0.0; dim];
                    v[seg.source[word].span.start] = sim;
                    v[own] = (1.0 - sim * sim).sqrt();
                    v
                }
                None => basis(own),
            }
        })
        .collect();
    SegmentEmbeddings {
        source: EmbeddingMatrix::new(&seg.id, Side::Source, source).expect("source matrix"),
        target: EmbeddingMatrix::new(&seg.id, Side::Target, target).expect("target matrix"),
    }
}

fn word_pairs(built: &Built, lo: f64, hi: f64) -> BTreeSet<(usize, usize)> {
    built
        .subword_links
        .iter()
        .filter_map(|&(t, link)| link.filter(|&(_, s)| s >= lo && s < hi).map(|(w, _)| (w, t)))
        .collect()
}

fn main() -> std::io::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data/toy".into()));
    fs::create_dir_all(&out)?;
    let built: Vec<Built> = CORPUS.iter().map(build).collect();
    let dim = built
        .iter()
        .map(|b| b.segment.subword_count(Side::Source) + b.subword_links.len())
        .max()
        .unwrap_or(1);

    let segments: Vec<Segment> = built.iter().map(|b| b.segment.clone()).collect();
    fs::write(out.join("segments.jsonl"), write_segments(&segments))?;
    let matrices: Vec<SegmentEmbeddings> = built.iter().map(|b| embeddings(b, dim)).collect();
    fs::write(out.join("embeddings.jsonl"), write_embeddings(&matrices))?;

    let mut external = Vec::new();
    let mut gold = Vec::new();
    for (toy, b) in CORPUS.iter().zip(&built) {
        gold.push(GoldAlignment {
            segment_id: toy.id.into(),
            sure: word_pairs(b, SURE_LINK, f64::INFINITY),
            possible: word_pairs(b, POSSIBLE_LINK, f64::INFINITY),
        });

        let mut pairs = word_pairs(b, TRUE_LINK, f64::INFINITY);

        pairs.extend(toy.external_extra);
        for missing in toy.external_missing {
            pairs.remove(missing);
        }
        let mut set = AlignmentSet::new(toy.id, Provenance::External);
        for (s, t) in pairs {
            set.insert(s, t, 1.0);
        }
        external.push(set);
    }
    fs::write(out.join("external.align"), write_pharaoh(&external))?;
    fs::write(out.join("gold.align"), write_gold(&gold))?;

    let mut judgments = String::from("segment_id,score,kind\n");
    for toy in CORPUS {
        judgments.push_str(&format!("{},{},error_based\n", toy.id, toy.mqm));
    }
    fs::write(out.join("judgments.csv"), judgments)?;
    eprintln!("wrote {} segments (dim {dim}) to {}", segments.len(), out.display());
    Ok(())
}
