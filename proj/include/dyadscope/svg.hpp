#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace dyadscope {

// Minimal templated-text SVG writer; no raster dependencies.
class SvgCanvas {
public:
    SvgCanvas(double width, double height);

    void rect(double x, double y, double w, double h, const std::string& fill);
    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width = 1.0);
    void text(double x, double y, const std::string& content, double font_size = 11.0,
              const std::string& anchor = "start", const std::string& fill = "#333333");
    void title(const std::string& content);

    // Panels are wrapped in <g class="..."> so reports stay countable.
    void open_group(const std::string& css_class);
    void close_group();

    std::string finish() const;

private:
    double width_, height_;
    std::ostringstream body_;
};

std::string svg_escape(const std::string& text);

// Fixed-point coordinate formatting: deterministic output bytes.
std::string svg_num(double v);

}  // namespace dyadscope
