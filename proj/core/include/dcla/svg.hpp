#pragma once

#include <string>

namespace dcla::svg {

// Minimal SVG document builder. Coordinates are formatted with fixed
// precision so identical inputs serialize byte-identically.
class Document {
public:
    Document(double width, double height);

    void rect(double x, double y, double w, double h, const std::string& fill,
              double fill_opacity = 1.0, const std::string& stroke = "",
              double stroke_width = 0.0);
    void circle(double cx, double cy, double r, const std::string& fill,
                double fill_opacity = 1.0, const std::string& stroke = "",
                double stroke_width = 0.0);
    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double width);
    /// Straight edge with a triangular arrowhead at the target end.
    void arrow(double x1, double y1, double x2, double y2, const std::string& stroke,
               double width);
    void text(double x, double y, const std::string& content, double size,
              const std::string& anchor = "start", const std::string& fill = "#000000");

    std::string str() const;
    void save(const std::string& path) const;

private:
    double width_;
    double height_;
    std::string body_;
};

std::string escape_text(const std::string& text);

} // namespace dcla::svg
