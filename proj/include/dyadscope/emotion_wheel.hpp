#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dyadscope {

// The eight-emotion wheel. The enumerator order is the canonical wheel
// order used everywhere ties must be broken deterministically.
enum class Emotion : std::uint8_t {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
};

inline constexpr std::size_t kEmotionCount = 8;

inline constexpr std::array<Emotion, kEmotionCount> kEmotionWheel = {
    Emotion::Anger,    Emotion::Anticipation, Emotion::Disgust,  Emotion::Fear,
    Emotion::Joy,      Emotion::Sadness,      Emotion::Surprise, Emotion::Trust,
};

// Researcher-coded emotion classes: the wheel plus "apprehension", an extra
// class present in coded data but never emitted by a lexicon.
enum class CodedEmotion : std::uint8_t {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
    Apprehension,
};

inline constexpr std::size_t kCodedEmotionCount = 9;

std::string_view emotion_name(Emotion e);
std::string_view coded_emotion_name(CodedEmotion e);

std::optional<Emotion> parse_emotion(std::string_view name);
std::optional<CodedEmotion> parse_coded_emotion(std::string_view name);

inline CodedEmotion to_coded(Emotion e) {
    return static_cast<CodedEmotion>(static_cast<std::uint8_t>(e));
}

// Apprehension has no wheel counterpart.
inline std::optional<Emotion> to_wheel(CodedEmotion c) {
    if (c == CodedEmotion::Apprehension) return std::nullopt;
    return static_cast<Emotion>(static_cast<std::uint8_t>(c));
}

}  // namespace dyadscope
