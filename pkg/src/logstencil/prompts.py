"""Prompt wording, kept in one place so tests can pin the exact bytes."""

PARSE_INSTRUCTION = (
    "You are an expert at parsing system log messages. For the last log message "
    "below, replace every dynamic variable (identifiers, numbers, addresses, "
    "paths, durations, and any other value that changes between occurrences) "
    "with the wildcard <*> and keep all constant text exactly as written. "
    "Print the log template on a single line enclosed in backticks."
)

MATCH_FIX_INSTRUCTION = (
    "The log template below was generated for the log message but does not "
    "match it: substituting text for each <*> cannot reproduce the message. "
    "Rewrite the template so that replacing every <*> with the corresponding "
    "variable text yields the log message exactly, keeping constant text "
    "unchanged. Print the corrected template on a single line enclosed in "
    "backticks."
)

ABSTRACT_FIX_INSTRUCTION = (
    "The log template below matches the log message, but some text abstracted "
    "as <*> may be constant diagnostic text that should stay in the template. "
    "Reconsider whether each phrase listed is really a variable; restore any "
    "that belong in the template. Print the final template on a single line "
    "enclosed in backticks."
)

DEMONSTRATION_BLOCK = "Log message: `{content}`\nLog template: `{template}`"

QUERY_BLOCK = "Log message: `{content}`\nLog template:"

MATCH_FIX_BLOCK = "Log message: `{content}`\nNon-matching template: `{template}`"

ABSTRACT_FIX_BLOCK = (
    "Log message: `{content}`\n"
    "Template: `{template}`\n"
    "Phrases abstracted as <*> that may be constants:\n"
    "{phrases}"
)
