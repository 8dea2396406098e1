#pragma once

#include <string>
#include <string_view>

#include "sri/format.hpp"

// Canonical instruction templates for the five prompt styles. The texts are
// frozen: golden tests compare rendered prompts byte-for-byte, so editing a
// template is a breaking change to every stored prompt and eval record.

namespace sri {

// Search/replace editing instructions. The marker text and window size are
// spliced in so configured markers and limits keep the prompt truthful.
inline std::string sri_system_prompt(const Marker& marker = Marker{},
                                     int window_lines = 10) {
    const std::string m = marker.text;
    std::string out;
    out += "You are a code edit assistant. Your task is to implement ONLY the middle code "
           "that needs to be completed while keeping all other code exactly as is.\n";
    out += "When you see a code file containing special comment markers " + m +
           ", you should:\n";
    out += "\n";
    out += "1. Generate a search/replace format output that:\n";
    out += "- Identifies the exact region containing the " + m + " marker\n";
    out += "- Provides the code that should replace the marker\n";
    out += "2. Use the following format exactly:\n";
    out += "```replace\n";
    out += "<<<<<<< SEARCH\n";
    out += "[Code section containing " + m + " marker with enough context]\n";
    out += "=======\n";
    out += "[Same code section with ONLY the middle code implemented]\n";
    out += ">>>>>>> REPLACE\n";
    out += "```\n";
    out += "3. Requirements:\n";
    out += "- Only edit the code within a " + std::to_string(window_lines) +
           "-line window around the identifier.\n";
    out += "- The search section MUST contain the " + m + " marker";
    return out;
}

inline constexpr std::string_view kNlStandardSystemPrompt =
    "You are a code completion assistant. Your task is to generate the missing middle code "
    "based on the provided context code, prefix code, and suffix code.\n"
    "\n"
    "Requirements:\n"
    "1. Generate ONLY the middle code that fits between the prefix and suffix\n"
    "2. Do not repeat or modify any existing code from the context, prefix, or suffix\n"
    "3. Format your response within a code block\n"
    "4. Maintain consistent indentation with the surrounding code\n"
    "5. Do not modify any other code\n"
    "6. Do not add any other text or comments\n"
    "\n"
    "The input will be provided in the following format:\n"
    "##Context Code##: [Full context code if any]\n"
    "##Prefix Code##: [Code before the missing part]\n"
    "##Suffix Code##: [Code after the missing part]";

inline constexpr std::string_view kNlDialogueSystemPrompt =
    "You are participating in a code review session. A developer has shared code with a gap "
    "in the middle, and you need to help reconstruct what's missing.\n"
    "\n"
    "The developer will provide:\n"
    "- Background context showing the broader code structure\n"
    "- The code written BEFORE the gap (prefix)\n"
    "- The code written AFTER the gap (suffix)\n"
    "\n"
    "Your role:\n"
    "- Analyze the flow from prefix to suffix\n"
    "- Determine what logic/code should bridge them\n"
    "- Respond with ONLY the bridging code segment\n"
    "- Preserve exact indentation and style\n"
    "- Don't alter any provided code\n"
    "- Don't include explanations or markdown formatting outside the code block\n"
    "\n"
    "Input structure:\n"
    "##Context Code##: [Surrounding code context]\n"
    "##Prefix Code##: [Code ending before gap]\n"
    "##Suffix Code##: [Code starting after gap]";

inline constexpr std::string_view kNlTemplateSystemPrompt =
    "You are a code template processor. You receive incomplete code templates where a "
    "section has been marked for automatic generation. Your job is to fill in the marked "
    "section.\n"
    "\n"
    "Template structure you'll receive:\n"
    "##Context Code##: [Optional: Full file or class context]\n"
    "##Prefix Code##: [Everything written up to the insertion point]\n"
    "##Suffix Code##: [Everything written after the insertion point]\n"
    "\n"
    "Processing rules:\n"
    "→ Output exclusively the infill code for the gap\n"
    "→ Match indentation level exactly as shown in prefix/suffix\n"
    "→ Treat prefix and suffix as immutable - never modify them\n"
    "→ No additional commentary or formatting\n"
    "→ Ensure syntactic continuity from prefix → your code → suffix\n"
    "→ Wrap output in a code block\n"
    "\n"
    "Think of this as: PREFIX + [YOUR_GENERATION] + SUFFIX = Complete Code";

}  // namespace sri
