//! Regular English inflection with small irregular tables.

const IRREGULAR_PLURALS: &[(&str, &str)] = &[
    ("man", "men"),
    ("woman", "women"),
    ("child", "children"),
    ("person", "people"),
    ("foot", "feet"),
    ("tooth", "teeth"),
    ("mouse", "mice"),
];

const IRREGULAR_3SG: &[(&str, &str)] = &[("have", "has"), ("be", "is"), ("do", "does")];

const IRREGULAR_PARTICIPLES: &[(&str, &str)] = &[
    ("be", "been"),
    ("become", "become"),
    ("begin", "begun"),
    ("bring", "brought"),
    ("build", "built"),
    ("buy", "bought"),
    ("choose", "chosen"),
    ("come", "come"),
    ("do", "done"),
    ("drive", "driven"),
    ("eat", "eaten"),
    ("find", "found"),
    ("forget", "forgotten"),
    ("get", "gotten"),
    ("give", "given"),
    ("go", "gone"),
    ("grow", "grown"),
    ("have", "had"),
    ("hold", "held"),
    ("keep", "kept"),
    ("know", "known"),
    ("lead", "led"),
    ("leave", "left"),
    ("make", "made"),
    ("mean", "meant"),
    ("pay", "paid"),
    ("put", "put"),
    ("read", "read"),
    ("run", "run"),
    ("say", "said"),
    ("see", "seen"),
    ("sell", "sold"),
    ("send", "sent"),
    ("set", "set"),
    ("speak", "spoken"),
    ("spend", "spent"),
    ("stand", "stood"),
    ("take", "taken"),
    ("teach", "taught"),
    ("tell", "told"),
    ("think", "thought"),
    ("understand", "understood"),
    ("win", "won"),
    ("write", "written"),
];

fn is_vowel(c: char) -> bool {
    matches!(c.to_ascii_lowercase(), 'a' | 'e' | 'i' | 'o' | 'u')
}

fn consonant_y(word: &str) -> bool {
    let mut rev = word.chars().rev();
    rev.next() == Some('y') && rev.next().is_some_and(|c| c.is_alphabetic() && !is_vowel(c))
}

fn sibilant(word: &str) -> bool {
    ["s", "x", "z", "ch", "sh"].iter().any(|s| word.ends_with(s))
}

/// Splits off the word that carries inflection: the text after the last space.
fn split_last_word(phrase: &str) -> (&str, &str) {
    match phrase.rfind(' ') {
        Some(i) => phrase.split_at(i + 1),
        None => ("", phrase),
    }
}

/// Plural of a noun (or of the last word of a multiword noun). Capitalized
/// words are treated as proper names and returned unchanged.
pub fn pluralize_noun(lemma: &str) -> String {
    let (prefix, word) = split_last_word(lemma);
    if word.chars().next().is_some_and(char::is_uppercase) || word.is_empty() {
        return lemma.to_string();
    }
    if word.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',') {
        return lemma.to_string();
    }
    let plural = if let Some((_, p)) = IRREGULAR_PLURALS.iter().find(|(s, _)| *s == word) {
        p.to_string()
    } else if consonant_y(word) {
        format!("{}ies", &word[..word.len() - 1])
    } else if sibilant(word) {
        format!("{word}es")
    } else {
        format!("{word}s")
    };
    format!("{prefix}{plural}")
}

fn third_singular(word: &str) -> String {
    if let Some((_, f)) = IRREGULAR_3SG.iter().find(|(b, _)| *b == word) {
        return f.to_string();
    }
    if consonant_y(word) {
        format!("{}ies", &word[..word.len() - 1])
    } else if sibilant(word) || word.ends_with('o') {
        format!("{word}es")
    } else {
        format!("{word}s")
    }
}

/// Third person singular present. For underscore compounds such as
/// `has_pet` the final segment is inflected; for phrasal verbs the first word.
pub fn inflect_verb_3sg(lemma: &str) -> String {
    if let Some((head, last)) = lemma.rsplit_once('_') {
        return format!("{head}_{}", third_singular(last));
    }
    match lemma.split_once(' ') {
        Some((verb, rest)) => format!("{} {rest}", third_singular(verb)),
        None => third_singular(lemma),
    }
}

/// A one-syllable consonant-vowel-consonant word whose final consonant doubles.
fn doubles_final(word: &str) -> bool {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    if n < 3 {
        return false;
    }
    let (a, b, c) = (chars[n - 3], chars[n - 2], chars[n - 1]);
    let vowel_groups = chars
        .iter()
        .enumerate()
        .filter(|(i, &ch)| is_vowel(ch) && (*i == 0 || !is_vowel(chars[i - 1])))
        .count();
    vowel_groups == 1 && !is_vowel(a) && is_vowel(b) && !is_vowel(c) && !"wxy".contains(c)
}

fn regular_ed(word: &str) -> String {
    if word.ends_with('e') {
        format!("{word}d")
    } else if consonant_y(word) {
        format!("{}ied", &word[..word.len() - 1])
    } else if doubles_final(word) {
        let last = word.chars().last().unwrap_or_default();
        format!("{word}{last}ed")
    } else {
        format!("{word}ed")
    }
}

/// Past participle, used for passive clauses.
pub fn past_participle(lemma: &str) -> String {
    let (verb, rest) = match lemma.split_once(' ') {
        Some((v, r)) => (v, format!(" {r}")),
        None => (lemma, String::new()),
    };
    let form = IRREGULAR_PARTICIPLES
        .iter()
        .find(|(b, _)| *b == verb)
        .map(|(_, p)| p.to_string())
        .unwrap_or_else(|| regular_ed(verb));
    format!("{form}{rest}")
}

const IRREGULAR_PAST: &[(&str, &str)] = &[
    ("be", "was"),
    ("become", "became"),
    ("begin", "began"),
    ("choose", "chose"),
    ("come", "came"),
    ("do", "did"),
    ("drive", "drove"),
    ("eat", "ate"),
    ("forget", "forgot"),
    ("get", "got"),
    ("give", "gave"),
    ("go", "went"),
    ("grow", "grew"),
    ("know", "knew"),
    ("run", "ran"),
    ("see", "saw"),
    ("speak", "spoke"),
    ("take", "took"),
    ("win", "won"),
    ("write", "wrote"),
];

/// Simple past; where it differs from the participle only irregular verbs do.
pub fn past_tense(lemma: &str) -> String {
    let (verb, rest) = match lemma.split_once(' ') {
        Some((v, r)) => (v, format!(" {r}")),
        None => (lemma, String::new()),
    };
    match IRREGULAR_PAST.iter().find(|(b, _)| *b == verb) {
        Some((_, p)) => format!("{p}{rest}"),
        None => past_participle(lemma),
    }
}

/// Present participle; only needed to fill the five-form verb paradigm.
pub fn present_participle(lemma: &str) -> String {
    let (verb, rest) = match lemma.split_once(' ') {
        Some((v, r)) => (v, format!(" {r}")),
        None => (lemma, String::new()),
    };
    let form = if let Some(stem) = verb.strip_suffix("ie") {
        format!("{stem}ying")
    } else if verb.ends_with('e') && !verb.ends_with("ee") && verb.len() > 2 {
        format!("{}ing", &verb[..verb.len() - 1])
    } else if doubles_final(verb) {
        let last = verb.chars().last().unwrap_or_default();
        format!("{verb}{last}ing")
    } else {
        format!("{verb}ing")
    };
    format!("{form}{rest}")
}
