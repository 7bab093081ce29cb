use super::Token;

const ETHIOPIC_FULL_STOP: char = '።';
const ETHIOPIC_WORDSPACE: char = '፡';
const ETHIOPIC_COMMA: char = '፣';

fn is_terminator(c: char) -> bool {
    matches!(c, ETHIOPIC_FULL_STOP | '?' | '!' | '.')
}

/// Splits raw text into sentences of tokens.
///
/// Sentences end at `።`, `?`, `!` or `.`, and the terminator is kept as the
/// last token. Whitespace and the Ethiopic wordspace `፡` separate words;
/// the Ethiopic comma `፣` separates words and is kept as a token.
pub fn tokenize_raw(text: &str) -> Vec<Vec<Token>> {
    let mut sentences = Vec::new();
    let mut sentence: Vec<Token> = Vec::new();
    let mut word = String::new();

    fn flush(word: &mut String, sentence: &mut Vec<Token>) {
        if !word.is_empty() {
            sentence.push(Token::new(std::mem::take(word)).expect("no whitespace in word"));
        }
    }

    for c in text.chars() {
        if c.is_whitespace() || c == ETHIOPIC_WORDSPACE {
            flush(&mut word, &mut sentence);
        } else if c == ETHIOPIC_COMMA {
            flush(&mut word, &mut sentence);
            sentence.push(Token::new(c.to_string()).expect("single char token"));
        } else if is_terminator(c) {
            flush(&mut word, &mut sentence);
            sentence.push(Token::new(c.to_string()).expect("single char token"));
            sentences.push(std::mem::take(&mut sentence));
        } else {
            word.push(c);
        }
    }
    flush(&mut word, &mut sentence);
    if !sentence.is_empty() {
        sentences.push(sentence);
    }
    sentences
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(sentences: &[Vec<Token>]) -> Vec<Vec<&str>> {
        sentences.iter().map(|s| s.iter().map(Token::as_str).collect()).collect()
    }

    #[test]
    fn splits_on_ethiopic_full_stop() {
        let s = tokenize_raw("a b። c d።");
        assert_eq!(words(&s), vec![vec!["a", "b", "።"], vec!["c", "d", "።"]]);
    }

    #[test]
    fn empty_input() {
        assert!(tokenize_raw("").is_empty());
        assert!(tokenize_raw("  \n\t ").is_empty());
    }

    #[test]
    fn comma_is_separate_token() {
        assert_eq!(words(&tokenize_raw("a፣b")), vec![vec!["a", "፣", "b"]]);
    }

    #[test]
    fn wordspace_separates_and_is_dropped() {
        assert_eq!(words(&tokenize_raw("ሰላም፡ዓለም።")), vec![vec!["ሰላም", "ዓለም", "።"]]);
    }

    #[test]
    fn ascii_terminators() {
        let s = tokenize_raw("who? me! yes.");
        assert_eq!(words(&s), vec![vec!["who", "?"], vec!["me", "!"], vec!["yes", "."]]);
    }
}
