#pragma once

#include <map>
#include <string>

namespace taxoalign {

/// Replaces every "{name}" placeholder with its value; unknown placeholders
/// are left untouched.
std::string fill_template(const std::string& tmpl,
                          const std::map<std::string, std::string>& values);

/// Versioned prompt templates. The same text ships as data under
/// assets/prompts/ so external runs can audit or override them.
namespace prompts {

const std::string& knowledge_slice();  // placeholders: {document}, {topic}
const std::string& verbalization();    // placeholders: {topic}, {slices}
const std::string& refinement();       // placeholders: {tree}, {topic}, {slices}
const std::string& judge();            // placeholders: {gold_tree}, {generated_tree}

/// Single-prompt instruction wrapper for backends that take one string
/// instead of a chat exchange. Placeholders: {instruction}, {input}.
const std::string& alpaca_instruction();

} // namespace prompts
} // namespace taxoalign
