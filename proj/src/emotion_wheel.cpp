#include "dyadscope/emotion_wheel.hpp"

namespace dyadscope {

namespace {

constexpr std::array<std::string_view, kCodedEmotionCount> kNames = {
    "anger",    "anticipation", "disgust",  "fear",        "joy",
    "sadness",  "surprise",     "trust",    "apprehension",
};

}  // namespace

std::string_view emotion_name(Emotion e) {
    return kNames[static_cast<std::size_t>(e)];
}

std::string_view coded_emotion_name(CodedEmotion e) {
    return kNames[static_cast<std::size_t>(e)];
}

std::optional<Emotion> parse_emotion(std::string_view name) {
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
        if (kNames[i] == name) return static_cast<Emotion>(i);
    }
    return std::nullopt;
}

std::optional<CodedEmotion> parse_coded_emotion(std::string_view name) {
    for (std::size_t i = 0; i < kCodedEmotionCount; ++i) {
        if (kNames[i] == name) return static_cast<CodedEmotion>(i);
    }
    return std::nullopt;
}

}  // namespace dyadscope
