#include "dyadscope/svg.hpp"

#include <cmath>
#include <cstdio>

namespace dyadscope {

std::string svg_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string svg_num(double v) {
    if (!std::isfinite(v)) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s(buf);
    // Trim trailing zeros, keep integers bare.
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s.empty() || s == "-0") s = "0";
    return s;
}

SvgCanvas::SvgCanvas(double width, double height) : width_(width), height_(height) {}

void SvgCanvas::rect(double x, double y, double w, double h, const std::string& fill) {
    body_ << "<rect x=\"" << svg_num(x) << "\" y=\"" << svg_num(y) << "\" width=\"" << svg_num(w)
          << "\" height=\"" << svg_num(h) << "\" fill=\"" << fill << "\"/>\n";
}

void SvgCanvas::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                     double stroke_width) {
    body_ << "<line x1=\"" << svg_num(x1) << "\" y1=\"" << svg_num(y1) << "\" x2=\"" << svg_num(x2)
          << "\" y2=\"" << svg_num(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
          << svg_num(stroke_width) << "\"/>\n";
}

void SvgCanvas::text(double x, double y, const std::string& content, double font_size,
                     const std::string& anchor, const std::string& fill) {
    body_ << "<text x=\"" << svg_num(x) << "\" y=\"" << svg_num(y) << "\" font-size=\""
          << svg_num(font_size) << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor
          << "\" fill=\"" << fill << "\">" << svg_escape(content) << "</text>\n";
}

void SvgCanvas::title(const std::string& content) {
    text(width_ / 2.0, 18.0, content, 14.0, "middle", "#111111");
}

void SvgCanvas::open_group(const std::string& css_class) {
    body_ << "<g class=\"" << css_class << "\">\n";
}

void SvgCanvas::close_group() { body_ << "</g>\n"; }

std::string SvgCanvas::finish() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_num(width_)
        << "\" height=\"" << svg_num(height_) << "\" viewBox=\"0 0 " << svg_num(width_) << " "
        << svg_num(height_) << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << svg_num(width_) << "\" height=\""
        << svg_num(height_) << "\" fill=\"#ffffff\"/>\n";
    out << body_.str();
    out << "</svg>\n";
    return out.str();
}

}  // namespace dyadscope
