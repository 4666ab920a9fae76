"""Contains class for drawing the C-index box plot of a report as SVG."""
from lxml import etree

SVG_NAMESPACE = "http://www.w3.org/2000/svg"


class BoxplotWriter:
    """
    Draws one box per configuration in report order, the mean and standard
    deviation above each box, and a dotted line at chance level.
    """

    def __init__(self, box_width=48, spacing=24, height=360, margin=56, y_range=(0.0, 1.0)):
        self.box_width = box_width
        self.spacing = spacing
        self.height = height
        self.margin = margin
        self.y_range = y_range

    def build(self, report):
        """
        Builds the SVG document of a report.
        :param report: Report.
        :return: lxml root element.
        """
        slot = self.box_width + self.spacing
        width = 2 * self.margin + slot * len(report.summaries)
        total_height = self.height + 2 * self.margin
        root = etree.Element("{%s}svg" % SVG_NAMESPACE, nsmap={None: SVG_NAMESPACE},
                             width=str(width), height=str(total_height),
                             viewBox="0 0 {0} {1}".format(width, total_height))
        etree.SubElement(root, "{%s}title" % SVG_NAMESPACE).text = "C-index by configuration"

        self._axis(root, width)
        self._line(root, self.margin, self._y(report.chance_level), width - self.margin,
                   self._y(report.chance_level), stroke="gray", **{"stroke-dasharray": "2,3",
                                                                  "class": "chance"})

        for position, summary in enumerate(report.summaries):
            center = self.margin + slot * position + slot / 2.0
            self._box(root, center, summary)
        return root

    def write(self, report, destination_file):
        """
        Writes the SVG document of a report to a binary file.
        :param report: Report.
        :param destination_file: File opened in binary mode.
        """
        destination_file.write(etree.tostring(self.build(report), pretty_print=True,
                                              xml_declaration=True, encoding="UTF-8"))

    def _box(self, root, center, summary):
        group = etree.SubElement(root, "{%s}g" % SVG_NAMESPACE,
                                 {"class": "box", "data-configuration": summary.configuration})
        left = center - self.box_width / 2.0
        right = center + self.box_width / 2.0
        self._line(group, center, self._y(summary.whisker_low), center, self._y(summary.q1),
                   stroke="black")
        self._line(group, center, self._y(summary.q3), center, self._y(summary.whisker_high),
                   stroke="black")
        etree.SubElement(group, "{%s}rect" % SVG_NAMESPACE, x=_number(left),
                         y=_number(self._y(summary.q3)), width=_number(self.box_width),
                         height=_number(self._y(summary.q1) - self._y(summary.q3)),
                         fill="white", stroke="black")
        self._line(group, left, self._y(summary.median), right, self._y(summary.median),
                   stroke="black", **{"stroke-width": "2"})
        for outlier in summary.outliers:
            etree.SubElement(group, "{%s}circle" % SVG_NAMESPACE, cx=_number(center),
                             cy=_number(self._y(outlier)), r="2", fill="none", stroke="black")

        label = etree.SubElement(group, "{%s}text" % SVG_NAMESPACE, x=_number(center),
                                 y=_number(self._y(summary.whisker_high) - 6))
        label.set("text-anchor", "middle")
        label.set("font-size", "10")
        label.text = "{0:.3f} ± {1:.3f}".format(summary.mean, summary.sd)

        name = etree.SubElement(group, "{%s}text" % SVG_NAMESPACE, x=_number(center),
                                y=_number(self.margin + self.height + 16))
        name.set("text-anchor", "middle")
        name.set("font-size", "10")
        name.text = summary.configuration

    def _axis(self, root, width):
        bottom = self.margin + self.height
        self._line(root, self.margin, self.margin, self.margin, bottom, stroke="black")
        low, high = self.y_range
        for step in range(11):
            value = low + (high - low) * step / 10.0
            y = self._y(value)
            self._line(root, self.margin - 4, y, self.margin, y, stroke="black")
            tick = etree.SubElement(root, "{%s}text" % SVG_NAMESPACE, x=_number(self.margin - 6),
                                    y=_number(y + 3))
            tick.set("text-anchor", "end")
            tick.set("font-size", "9")
            tick.text = "{0:.1f}".format(value)

    def _line(self, parent, x1, y1, x2, y2, **attributes):
        element = etree.SubElement(parent, "{%s}line" % SVG_NAMESPACE, x1=_number(x1),
                                   y1=_number(y1), x2=_number(x2), y2=_number(y2))
        for key, value in attributes.items():
            element.set(key, value)
        return element

    def _y(self, value):
        low, high = self.y_range
        share = (min(max(value, low), high) - low) / (high - low)
        return self.margin + self.height * (1.0 - share)


def _number(value):
    return "{0:.2f}".format(value)
