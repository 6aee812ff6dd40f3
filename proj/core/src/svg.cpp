#include "dcla/svg.hpp"

#include "dcla/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace dcla::svg {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

std::string escape_text(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char ch : text) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(ch);
        }
    }
    return out;
}

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::rect(double x, double y, double w, double h, const std::string& fill,
                    double fill_opacity, const std::string& stroke, double stroke_width) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
             "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"";
    if (fill_opacity < 1.0) {
        body_ += " fill-opacity=\"" + num(fill_opacity) + "\"";
    }
    if (!stroke.empty()) {
        body_ += " stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_width) + "\"";
    }
    body_ += "/>\n";
}

void Document::circle(double cx, double cy, double r, const std::string& fill,
                      double fill_opacity, const std::string& stroke, double stroke_width) {
    body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
             "\" fill=\"" + fill + "\"";
    if (fill_opacity < 1.0) {
        body_ += " fill-opacity=\"" + num(fill_opacity) + "\"";
    }
    if (!stroke.empty()) {
        body_ += " stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_width) + "\"";
    }
    body_ += "/>\n";
}

void Document::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                    double width) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
             "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
             num(width) + "\"/>\n";
}

void Document::arrow(double x1, double y1, double x2, double y2, const std::string& stroke,
                     double width) {
    const double dx = x2 - x1;
    const double dy = y2 - y1;
    const double len = std::hypot(dx, dy);
    if (len < 1e-9) {
        return;
    }
    const double ux = dx / len;
    const double uy = dy / len;
    const double head = std::max(4.0, 3.0 * width);
    // shorten the shaft so it does not poke through the head
    const double bx = x2 - head * ux;
    const double by = y2 - head * uy;
    line(x1, y1, bx, by, stroke, width);
    const double px = -uy;
    const double py = ux;
    const double half = head * 0.5;
    body_ += "<polygon points=\"" + num(x2) + "," + num(y2) + " " +
             num(bx + half * px) + "," + num(by + half * py) + " " +
             num(bx - half * px) + "," + num(by - half * py) + "\" fill=\"" + stroke +
             "\"/>\n";
}

void Document::text(double x, double y, const std::string& content, double size,
                    const std::string& anchor, const std::string& fill) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
             "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\" fill=\"" + fill +
             "\">" + escape_text(content) + "</text>\n";
}

std::string Document::str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           num(width_) + "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) +
           " " + num(height_) + "\">\n" + body_ + "</svg>\n";
}

void Document::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    out << str();
    if (!out) {
        throw Error(ErrorCode::IoError, "short write to " + path);
    }
}

} // namespace dcla::svg
