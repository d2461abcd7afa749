use unicode_segmentation::UnicodeSegmentation;

/// A lowercased word token with its character span in the source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

/// Splits on Unicode word boundaries, keeping segments that contain a
/// letter or digit. Spans count chars, not bytes; `end` is exclusive.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut chars_before = 0;
    let mut last_byte = 0;
    for (byte, word) in text.split_word_bound_indices() {
        chars_before += text[last_byte..byte].chars().count();
        last_byte = byte;
        if word.chars().any(char::is_alphanumeric) {
            let len = word.chars().count();
            out.push(Token { text: word.to_lowercase(), start: chars_before, end: chars_before + len });
        }
    }
    out
}
